import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/* a model whose only confident kind is "task", so every capture routes there */
const SEED_MODEL = `
import math
import sys

import numpy as np

from noteroute.model import KINDS
from noteroute.router.features import FeatureSpec
from noteroute.router.model import RouterModel, save_model

out = sys.argv[1]
spec = FeatureSpec(hash_dims=2**10)
n = len(KINDS)
bias = np.full(n, -9.0)
bias[KINDS.index("task")] = math.log(0.9 / 0.1)
model = RouterModel(
    spec=spec,
    weights=np.zeros((n, spec.dimension)),
    bias=bias,
    thresholds=np.full(n, 0.5),
)
with open(out, "wb") as fh:
    fh.write(save_model(model))
`;

export interface RunningGateway {
  baseUrl: string;
  stop(): Promise<void>;
}

let nextPort = 18100 + Math.floor(Math.random() * 500);

/** Start a fresh gateway on its own port with its own empty data directory. */
export async function startGateway(): Promise<RunningGateway> {
  const port = nextPort++;
  const dir = mkdtempSync(join(tmpdir(), "workbench-e2e-"));
  const modelPath = join(dir, "model.bin");
  await runOnce("python3", ["-c", SEED_MODEL, modelPath]);

  const child = spawn(
    "noteroute",
    [
      "serve",
      "--host", "127.0.0.1",
      "--port", String(port),
      "--vault", join(dir, "vault.bin"),
      "--model", modelPath,
      "--ledger", join(dir, "feedback.jsonl"),
    ],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  const stderr: string[] = [];
  child.stderr?.on("data", (chunk) => stderr.push(String(chunk)));

  const baseUrl = `http://127.0.0.1:${port}`;
  await waitReady(baseUrl, child, stderr);
  return { baseUrl, stop: () => stop(child) };
}

function runOnce(cmd: string, args: string[]): Promise<void> {
  return new Promise((resolve, reject) => {
    const child = spawn(cmd, args, { stdio: ["ignore", "ignore", "pipe"] });
    const err: string[] = [];
    child.stderr?.on("data", (chunk) => err.push(String(chunk)));
    child.on("error", reject);
    child.on("close", (code) => {
      if (code === 0) resolve();
      else reject(new Error(`${cmd} exited with ${code}: ${err.join("")}`));
    });
  });
}

async function waitReady(
  baseUrl: string,
  child: ChildProcess,
  stderr: string[],
): Promise<void> {
  const deadline = Date.now() + 45_000;
  let exited = false;
  child.on("exit", () => {
    exited = true;
  });
  while (Date.now() < deadline) {
    if (exited) {
      throw new Error(`gateway exited before it was ready: ${stderr.join("")}`);
    }
    try {
      const resp = await fetch(`${baseUrl}/stats`);
      if (resp.ok) return;
    } catch {
      /* not listening yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  child.kill("SIGKILL");
  throw new Error(`gateway never came up on ${baseUrl}: ${stderr.join("")}`);
}

function stop(child: ChildProcess): Promise<void> {
  return new Promise((resolve) => {
    if (child.exitCode !== null) {
      resolve();
      return;
    }
    const hardKill = setTimeout(() => child.kill("SIGKILL"), 5_000);
    child.on("exit", () => {
      clearTimeout(hardKill);
      resolve();
    });
    child.kill("SIGTERM");
  });
}
