/**
 * TypeScript bindings for the satquiz question renderer and reward verifier.
 *
 * The bindings consume the core package only through its external interfaces:
 * the JSONL dataset format (parsed natively) and the `python3 -m satquiz`
 * command line (spawned for rendering, extraction, verification, and reward
 * computation). No verification logic is reimplemented host-side, so results
 * are bit-identical to the core by construction.
 *
 * The Python interpreter defaults to `python3` and can be overridden with the
 * SATQUIZ_PYTHON environment variable.
 */

import { spawnSync } from "node:child_process";
import { readFileSync } from "node:fs";

export type ProblemType = "satdp" | "satsp" | "maxsat" | "mcs" | "mus";
export type QuestionFormat = "math" | "dimacs" | "story" | "dualstory";
export type Template = "eval" | "rft";
export type ExtractionMode = "answer-line" | "tag";
export type SubTask = "sat" | "unsat";

export interface DatasetRecord {
  readonly pairId: string;
  readonly n: number;
  readonly m: number;
  readonly pK2: number;
  readonly pGeo: number;
  readonly seed: number;
  readonly flipCount: number;
  readonly satDimacs: string;
  readonly unsatDimacs: string;
  readonly stats: Record<string, unknown> | null;
}

export interface Dataset {
  readonly path: string;
  readonly records: readonly DatasetRecord[];
}

export interface RenderedQuestion {
  readonly pairId: string;
  readonly ptype: ProblemType;
  readonly format: QuestionFormat;
  readonly template: Template;
  readonly subTask: SubTask | null;
  readonly systemPrompt: string;
  readonly prompt: string;
  readonly expectedAnswerLen: number;
  readonly extractionMode: ExtractionMode;
}

export interface Verdict {
  readonly formatOk: boolean;
  readonly semanticOk: boolean;
  readonly detail: string;
}

export type ExtractResult =
  | { ok: true; bits: string }
  | { ok: false; kind: "missing" | "length" | "chars"; detail: string };

export interface RewardWeights {
  readonly correctness?: number;
  readonly tagCount?: number;
  readonly formatMatch?: number;
}

export interface RewardItem {
  readonly pairId: string;
  readonly ptype: ProblemType;
  readonly response: string;
  readonly subTask?: SubTask;
}

export type RewardResult = { reward: number } | { error: string };

/** Dataset file or schema problem; the message names the offending line. */
export class DatasetError extends Error {}

/** The spawned core CLI failed in an unexpected way. */
export class CliError extends Error {}

const SCHEMA_VERSION = 1;

function pythonInterpreter(): string {
  return process.env.SATQUIZ_PYTHON ?? "python3";
}

function runCli(
  args: string[],
  stdin?: string,
): { status: number; stdout: string; stderr: string } {
  const result = spawnSync(pythonInterpreter(), ["-m", "satquiz", ...args], {
    input: stdin,
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (result.error) {
    throw new CliError(`failed to spawn core CLI: ${result.error.message}`);
  }
  return {
    status: result.status ?? -1,
    stdout: result.stdout,
    stderr: result.stderr,
  };
}

function expectField<T>(obj: Record<string, unknown>, key: string, line: number): T {
  if (!(key in obj) || obj[key] === undefined) {
    throw new DatasetError(`line ${line}: missing field "${key}"`);
  }
  return obj[key] as T;
}

/**
 * Load a JSONL dataset file produced by the core `dataset` command.
 *
 * Throws DatasetError naming the offending line on corrupt input or a
 * schema-version mismatch. Records are read-only snapshots.
 */
export function loadDataset(path: string): Dataset {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new DatasetError(`cannot read dataset ${path}: ${(err as Error).message}`);
  }
  const records: DatasetRecord[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const lineno = i + 1;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line) as Record<string, unknown>;
    } catch (err) {
      throw new DatasetError(`line ${lineno}: corrupt record (${(err as Error).message})`);
    }
    const version = obj["schema_version"];
    if (version !== SCHEMA_VERSION) {
      throw new DatasetError(`line ${lineno}: unsupported schema_version ${String(version)}`);
    }
    records.push(
      Object.freeze({
        pairId: expectField<string>(obj, "pair_id", lineno),
        n: expectField<number>(obj, "n", lineno),
        m: expectField<number>(obj, "m", lineno),
        pK2: expectField<number>(obj, "p_k2", lineno),
        pGeo: expectField<number>(obj, "p_geo", lineno),
        seed: expectField<number>(obj, "seed", lineno),
        flipCount: expectField<number>(obj, "flip_count", lineno),
        satDimacs: expectField<string>(obj, "sat_dimacs", lineno),
        unsatDimacs: expectField<string>(obj, "unsat_dimacs", lineno),
        stats: (obj["stats"] as Record<string, unknown> | null) ?? null,
      }),
    );
  }
  return { path, records: Object.freeze(records) };
}

export function findRecord(dataset: Dataset, pairId: string): DatasetRecord {
  const record = dataset.records.find((r) => r.pairId === pairId);
  if (!record) {
    throw new DatasetError(`unknown pair_id "${pairId}" in ${dataset.path}`);
  }
  return record;
}

/**
 * Render the prompt(s) for one pair and task. The decision problem yields
 * two questions (sat and unsat sub-tasks); all other types yield one.
 */
export function renderQuestion(
  dataset: Dataset,
  pairId: string,
  ptype: ProblemType,
  format: QuestionFormat,
  template: Template = "eval",
): RenderedQuestion[] {
  const result = runCli([
    "render",
    "--dataset",
    dataset.path,
    "--pair-id",
    pairId,
    "--ptype",
    ptype,
    "--format",
    format,
    "--template",
    template,
    "--json",
  ]);
  if (result.status !== 0) {
    throw new CliError(`render failed: ${result.stderr.trim()}`);
  }
  const raw = JSON.parse(result.stdout) as Array<Record<string, unknown>>;
  return raw.map((q) => ({
    pairId: q["pair_id"] as string,
    ptype: q["ptype"] as ProblemType,
    format: q["format"] as QuestionFormat,
    template: q["template"] as Template,
    subTask: (q["sub_task"] as SubTask | null) ?? null,
    systemPrompt: q["system_prompt"] as string,
    prompt: q["prompt"] as string,
    expectedAnswerLen: q["expected_answer_len"] as number,
    extractionMode: q["extraction_mode"] as ExtractionMode,
  }));
}

/** Extract a binary answer string from raw response text. */
export function extractAnswer(
  text: string,
  mode: ExtractionMode,
  expectedLen: number,
): ExtractResult {
  const result = runCli(
    ["extract", "--mode", mode, "--expected-len", String(expectedLen), "--response", "-"],
    text,
  );
  if (result.status !== 0 && result.status !== 2) {
    throw new CliError(`extract failed: ${result.stderr.trim()}`);
  }
  return JSON.parse(result.stdout) as ExtractResult;
}

/**
 * Verify a raw response against one task. For the decision problem pass a
 * subTask to grade a single response, or call once per sub-task.
 */
export function verify(
  dataset: Dataset,
  pairId: string,
  ptype: ProblemType,
  response: string,
  mode: ExtractionMode,
  subTask?: SubTask,
): Verdict {
  const args = [
    "verify",
    "--dataset",
    dataset.path,
    "--pair-id",
    pairId,
    "--ptype",
    ptype,
    "--mode",
    mode,
    "--response",
    "-",
  ];
  if (subTask) {
    args.push("--sub-task", subTask);
  }
  const result = runCli(args, response);
  if (result.status === 3 || result.status === -1) {
    throw new CliError(`verify failed: ${result.stderr.trim()}`);
  }
  const obj = JSON.parse(result.stdout) as Record<string, unknown>;
  return {
    formatOk: obj["format_ok"] as boolean,
    semanticOk: obj["semantic_ok"] as boolean,
    detail: obj["detail"] as string,
  };
}

function weightArgs(weights?: RewardWeights): string[] {
  if (!weights) return [];
  const args: string[] = [];
  if (weights.correctness !== undefined) {
    args.push("--w-correctness", String(weights.correctness));
  }
  if (weights.tagCount !== undefined) {
    args.push("--w-tag-count", String(weights.tagCount));
  }
  if (weights.formatMatch !== undefined) {
    args.push("--w-format-match", String(weights.formatMatch));
  }
  return args;
}

/** Scalar reward for one response (tag extraction mode, default weights). */
export function reward(
  dataset: Dataset,
  pairId: string,
  ptype: ProblemType,
  response: string,
  subTask?: SubTask,
  weights?: RewardWeights,
): number {
  const args = [
    "reward",
    "--dataset",
    dataset.path,
    "--pair-id",
    pairId,
    "--ptype",
    ptype,
    "--response",
    "-",
    ...weightArgs(weights),
  ];
  if (subTask) {
    args.push("--sub-task", subTask);
  }
  const result = runCli(args, response);
  if (result.status !== 0) {
    throw new CliError(`reward failed: ${result.stderr.trim()}`);
  }
  return Number(result.stdout.trim());
}

/**
 * Compute rewards for a batch of responses in one core process.
 *
 * Order-preserving: result i corresponds to items[i]. A bad item (unknown
 * pair id, malformed task) yields an error marker in its slot without
 * aborting the rest of the batch. An empty batch returns an empty array.
 */
export function batchReward(
  dataset: Dataset,
  items: readonly RewardItem[],
  weights?: RewardWeights,
): RewardResult[] {
  if (items.length === 0) return [];
  const stdin = items
    .map((item) =>
      JSON.stringify({
        pair_id: item.pairId,
        ptype: item.ptype,
        response: item.response,
        ...(item.subTask ? { sub_task: item.subTask } : {}),
      }),
    )
    .join("\n");
  const result = runCli(
    ["reward", "--dataset", dataset.path, "--batch", ...weightArgs(weights)],
    stdin + "\n",
  );
  if (result.status !== 0) {
    throw new CliError(`batch reward failed: ${result.stderr.trim()}`);
  }
  const lines = result.stdout.split("\n").filter((l) => l.trim() !== "");
  if (lines.length !== items.length) {
    throw new CliError(
      `batch reward returned ${lines.length} results for ${items.length} items`,
    );
  }
  return lines.map((line) => JSON.parse(line) as RewardResult);
}
