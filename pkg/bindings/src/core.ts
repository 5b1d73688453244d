// Process plumbing shared by every bound class.  All model logic lives in
// the core; this file only moves bytes in and out of the `ramnet` CLI.

import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export const EXIT_OK = 0;
export const EXIT_USAGE = 2;
export const EXIT_WARNINGS = 3;

/** Raised when the core reports a usage or data error. */
export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr: string) {
    super(message);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

/** Raised when a regression query hits only untrained cells. */
export class NoInformationError extends Error {
  constructor(message = "no trained cell admitted the pattern") {
    super(message);
    this.name = "NoInformationError";
  }
}

export interface CliResult {
  stdout: string;
  stderr: string;
  exitCode: number;
}

function cliExecutable(): string {
  return process.env.RAMNET_CLI ?? "ramnet";
}

/** Run one CLI invocation; throws CliError on a usage/data exit. */
export function runCli(args: string[], input?: string): CliResult {
  const proc = spawnSync(cliExecutable(), args, {
    input: input ?? "",
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw new CliError(
      `could not run ${cliExecutable()}: ${proc.error.message}`,
      -1,
      "",
    );
  }
  const exitCode = proc.status ?? -1;
  if (exitCode !== EXIT_OK && exitCode !== EXIT_WARNINGS) {
    const detail = proc.stderr.trim() || `exit code ${exitCode}`;
    throw new CliError(detail, exitCode, proc.stderr);
  }
  return { stdout: proc.stdout, stderr: proc.stderr, exitCode };
}

/** Write content to a temp file, hand its path to fn, always clean up. */
export function withTempFile<T>(content: string, fn: (file: string) => T): T {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "ramnet-"));
  const file = path.join(dir, "model.json");
  try {
    fs.writeFileSync(file, content);
    return fn(file);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

export function checkFeatures(features: readonly number[]): void {
  if (!Array.isArray(features) || features.length === 0) {
    throw new TypeError("features must be a non-empty array of numbers");
  }
  for (const value of features) {
    if (typeof value !== "number" || !Number.isInteger(value)) {
      throw new TypeError(`feature values must be integers, got ${value}`);
    }
  }
}

/** One JSONL row in the exact shape the CLI reads. */
export function featureRow(
  features: readonly number[],
  label?: string,
  target?: number,
): string {
  checkFeatures(features);
  const row: Record<string, unknown> = { features };
  if (label !== undefined) {
    if (typeof label !== "string") {
      throw new TypeError("label must be a string");
    }
    row.label = label;
  }
  if (target !== undefined) {
    if (typeof target !== "number" || !Number.isFinite(target)) {
      throw new TypeError("target must be a finite number");
    }
    row.target = target;
  }
  return JSON.stringify(row);
}
