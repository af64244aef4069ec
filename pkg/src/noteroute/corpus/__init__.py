from noteroute.corpus.client import (
    ClientError,
    HttpTextClient,
    StubTextClient,
    TextClient,
    client_from_config,
)
from noteroute.corpus.generate import (
    ConfigError,
    GenerationConfig,
    default_kind_prior,
    generate_corpus,
)
from noteroute.corpus.ingest import (
    FatalError,
    FieldMapping,
    IngestError,
    ingest_dataset,
)
from noteroute.corpus.personas import (
    PersonaProfile,
    PersonaStyle,
    WeeklyPlan,
    builtin_profiles,
)
from noteroute.corpus.qa import (
    CheckResult,
    QAConfig,
    QAReport,
    qa_pipeline,
    qa_stage1,
    qa_stage2,
)
from noteroute.corpus.reference import make_reference_corpus, write_reference_dataset
from noteroute.corpus.routing import RoutingError, route_concepts, rule_concepts
from noteroute.corpus.stats import (
    REFERENCE_CONCEPT_COUNT,
    REFERENCE_KIND_COUNTS,
    REFERENCE_NOTE_COUNT,
    REFERENCE_QA_PASSED,
    CorpusStats,
    corpus_stats,
)

__all__ = [
    "ClientError",
    "HttpTextClient",
    "StubTextClient",
    "TextClient",
    "client_from_config",
    "ConfigError",
    "GenerationConfig",
    "default_kind_prior",
    "generate_corpus",
    "FatalError",
    "FieldMapping",
    "IngestError",
    "ingest_dataset",
    "PersonaProfile",
    "PersonaStyle",
    "WeeklyPlan",
    "builtin_profiles",
    "CheckResult",
    "QAConfig",
    "QAReport",
    "qa_pipeline",
    "qa_stage1",
    "qa_stage2",
    "make_reference_corpus",
    "write_reference_dataset",
    "RoutingError",
    "route_concepts",
    "rule_concepts",
    "REFERENCE_CONCEPT_COUNT",
    "REFERENCE_KIND_COUNTS",
    "REFERENCE_NOTE_COUNT",
    "REFERENCE_QA_PASSED",
    "CorpusStats",
    "corpus_stats",
]
