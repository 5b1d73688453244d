// Bound binarizers.  transform() round-trips one CSV row through the
// CLI's binarize subcommand; save() captures the encoder document.

import * as fs from "node:fs";
import { runCli, withTempFile } from "./core.js";

function checkValues(values: readonly number[], what = "values"): void {
  if (!Array.isArray(values) || values.length === 0) {
    throw new TypeError(`${what} must be a non-empty array of numbers`);
  }
  for (const value of values) {
    if (typeof value !== "number" || !Number.isFinite(value)) {
      throw new TypeError(`${what} must be finite numbers, got ${value}`);
    }
  }
}

function csvDocument(values: readonly number[]): string {
  const header = values.map((_, i) => `c${i}`).join(",");
  const row = values.map((v) => String(v)).join(",");
  return header + "\n" + row + "\n";
}

abstract class BoundBinarizer {
  protected abstract encoderArgs(): string[];

  /** Binarize one numeric vector. */
  transform(values: readonly number[]): number[] {
    checkValues(values);
    const res = runCli(
      [...this.encoderArgs(), "--in", "-", "--out", "-"],
      csvDocument(values),
    );
    const line = res.stdout.split("\n", 1)[0] ?? "";
    return (JSON.parse(line) as { features: number[] }).features;
  }

  /** The encoder as a model document. */
  save(): string {
    return withTempFile("", (file) => {
      runCli(
        [...this.encoderArgs(), "--in", "-", "--out", "-", "--encoder-out", file],
        "c0\n",
      );
      return fs.readFileSync(file, "utf8").trimEnd();
    });
  }
}

export class Thresholding extends BoundBinarizer {
  constructor(readonly threshold: number) {
    super();
  }

  protected encoderArgs(): string[] {
    return [
      "binarize",
      "--encoder",
      "thresholding",
      "--threshold",
      String(this.threshold),
    ];
  }
}

export class MeanThresholding extends BoundBinarizer {
  protected encoderArgs(): string[] {
    return ["binarize", "--encoder", "mean-thresholding"];
  }
}

export class Thermometer extends BoundBinarizer {
  constructor(
    readonly size: number,
    readonly minimum: number,
    readonly maximum: number,
  ) {
    super();
  }

  protected encoderArgs(): string[] {
    return [
      "binarize",
      "--encoder",
      "thermometer",
      "--size",
      String(this.size),
      "--minimum",
      String(this.minimum),
      "--maximum",
      String(this.maximum),
    ];
  }
}

export class KernelCanvas extends BoundBinarizer {
  constructor(
    readonly dim: number,
    readonly numKernels: number,
    readonly bitsByKernel = 1,
    readonly seed = 0,
  ) {
    super();
  }

  protected encoderArgs(): string[] {
    return [
      "binarize",
      "--encoder",
      "kernel-canvas",
      "--dim",
      String(this.dim),
      "--num-kernels",
      String(this.numKernels),
      "--bits-by-kernel",
      String(this.bitsByKernel),
      "--seed",
      String(this.seed),
    ];
  }

  /** Binarize one sequence of dim-sized points. */
  transformPoints(points: readonly (readonly number[])[]): number[] {
    if (!Array.isArray(points) || points.length === 0) {
      throw new TypeError("points must be a non-empty array of vectors");
    }
    const flat: number[] = [];
    for (const point of points) {
      checkValues(point, "point");
      if (point.length !== this.dim) {
        throw new TypeError(
          `point has ${point.length} values, expected dim ${this.dim}`,
        );
      }
      flat.push(...point);
    }
    return this.transform(flat);
  }
}
