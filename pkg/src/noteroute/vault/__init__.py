from noteroute.vault.embedding import (
    DEFAULT_DIMENSION,
    EmbeddingRecord,
    degenerate_embedding,
    dump_embeddings_jsonl,
    embed,
    load_embeddings_jsonl,
)
from noteroute.vault.index import EmptyIndex, IndexSnapshot, search_topk
from noteroute.vault.store import (
    ChecksumError,
    ConflictError,
    NotFound,
    NoteRecord,
    PartialWrite,
    Vault,
    VaultError,
)

__all__ = [
    "DEFAULT_DIMENSION",
    "EmbeddingRecord",
    "degenerate_embedding",
    "embed",
    "dump_embeddings_jsonl",
    "load_embeddings_jsonl",
    "EmptyIndex",
    "IndexSnapshot",
    "search_topk",
    "Vault",
    "NoteRecord",
    "VaultError",
    "NotFound",
    "ConflictError",
    "ChecksumError",
    "PartialWrite",
]
