// Bound model classes.  Each instance owns one model document and every
// method maps onto exactly one CLI operation; nothing here computes.

import {
  CliError,
  NoInformationError,
  featureRow,
  runCli,
  withTempFile,
} from "./core.js";

export interface ScoreTable {
  bleach: number;
  raw: Record<string, number>;
  normalized: Record<string, number>;
}

interface InspectReport {
  modelType: string;
  params: Record<string, unknown>;
  stats?: Record<string, unknown>;
  labels?: string[];
  mentalImages?: Record<string, unknown>;
}

abstract class BoundModel {
  protected document: string | null = null;

  /** `--model` plus hyperparameter flags for a fresh document. */
  protected abstract creationArgs(): string[];

  /** Current document text, creating an untrained one on demand. */
  save(): string {
    if (this.document === null) {
      const res = runCli(
        ["train", ...this.creationArgs(), "--in", "-", "--out", "-"],
        "",
      );
      this.document = res.stdout.trimEnd();
    }
    return this.document;
  }

  getsizeof(): number {
    return Buffer.byteLength(this.save(), "utf8");
  }

  protected trainRow(row: string): void {
    if (this.document === null) {
      const res = runCli(
        ["train", ...this.creationArgs(), "--in", "-", "--out", "-"],
        row + "\n",
      );
      this.document = res.stdout.trimEnd();
      return;
    }
    const res = withTempFile(this.document, (file) =>
      runCli(["train", "--resume", file, "--in", "-", "--out", "-"], row + "\n"),
    );
    this.document = res.stdout.trimEnd();
  }

  /** One predict-family call on one row; returns the output line. */
  protected queryLine(modeArgs: string[], row: string): string {
    const res = withTempFile(this.save(), (file) =>
      runCli(
        ["predict", file, ...modeArgs, "--in", "-", "--out", "-"],
        row + "\n",
      ),
    );
    return res.stdout.split("\n", 1)[0] ?? "";
  }

  protected inspect(): InspectReport {
    const res = withTempFile(this.save(), (file) =>
      runCli(["inspect", file]),
    );
    return JSON.parse(res.stdout) as InspectReport;
  }

  protected adoptDocument(text: string, expectedType: string): void {
    const trimmed = text.trimEnd();
    const res = withTempFile(trimmed, (file) => runCli(["inspect", file]));
    const report = JSON.parse(res.stdout) as InspectReport;
    if (report.modelType !== expectedType) {
      throw new CliError(
        `document holds a ${report.modelType} model, not ${expectedType}`,
        -1,
        "",
      );
    }
    this.document = trimmed;
  }
}

function flag(name: string, value: number | undefined): string[] {
  return value === undefined ? [] : [name, String(value)];
}

function boolFlag(name: string, value: boolean | undefined): string[] {
  return value ? [name] : [];
}

// -- classification ------------------------------------------------------

export interface WisardOptions {
  addressSize: number;
  base?: number;
  ignoreZero?: boolean;
  balanced?: boolean;
  completeAddressSize?: boolean;
  seed?: number;
}

export class Wisard extends BoundModel {
  constructor(private options: WisardOptions) {
    super();
  }

  protected creationArgs(): string[] {
    const o = this.options;
    return [
      "--model",
      "wisard",
      "--tuple-size",
      String(o.addressSize),
      ...flag("--base", o.base),
      ...boolFlag("--ignore-zero", o.ignoreZero),
      ...boolFlag("--balanced", o.balanced),
      ...boolFlag("--complete-address", o.completeAddressSize),
      ...flag("--seed", o.seed),
    ];
  }

  train(features: readonly number[], label: string): void {
    this.trainRow(featureRow(features, label));
  }

  untrain(features: readonly number[], label: string): void {
    const res = withTempFile(this.save(), (file) =>
      runCli(
        ["untrain", file, "--in", "-", "--out", "-"],
        featureRow(features, label) + "\n",
      ),
    );
    this.document = res.stdout.trimEnd();
  }

  classify(features: readonly number[], bleach = 0): string {
    const args = bleach ? ["--bleaching", String(bleach)] : [];
    return this.queryLine(args, featureRow(features));
  }

  rank(features: readonly number[]): string[] {
    return JSON.parse(
      this.queryLine(["--mode", "rank"], featureRow(features)),
    ) as string[];
  }

  score(features: readonly number[], bleach = 0): ScoreTable {
    const args = ["--mode", "score"];
    if (bleach) args.push("--bleaching", String(bleach));
    return JSON.parse(this.queryLine(args, featureRow(features))) as ScoreTable;
  }

  getMentalImage(label: string): number[] {
    const images = this.inspect().mentalImages as
      | Record<string, number[]>
      | undefined;
    const image = images?.[label];
    if (image === undefined) {
      throw new CliError(`no discriminator for label ${label}`, -1, "");
    }
    return image;
  }

  static load(text: string): Wisard {
    const model = new Wisard({ addressSize: 1 });
    model.adoptDocument(text, "wisard");
    const params = JSON.parse(model.save()).params;
    model.options = {
      addressSize: params.addressSize,
      base: params.base,
      ignoreZero: params.ignoreZero,
      balanced: params.balanced,
      completeAddressSize: params.completeAddressSize,
      seed: params.seed,
    };
    return model;
  }
}

export interface CluswisardOptions {
  addressSize: number;
  minScore: number;
  threshold: number;
  discriminatorsLimit: number;
  completeAddressSize?: boolean;
  seed?: number;
}

export class Cluswisard extends BoundModel {
  constructor(private options: CluswisardOptions) {
    super();
  }

  protected creationArgs(): string[] {
    const o = this.options;
    return [
      "--model",
      "clus",
      "--tuple-size",
      String(o.addressSize),
      "--min-score",
      String(o.minScore),
      "--threshold",
      String(o.threshold),
      "--limit",
      String(o.discriminatorsLimit),
      ...boolFlag("--complete-address", o.completeAddressSize),
      ...flag("--seed", o.seed),
    ];
  }

  train(features: readonly number[], label: string): void {
    this.trainRow(featureRow(features, label));
  }

  trainUnsupervised(features: readonly number[]): void {
    this.trainRow(featureRow(features));
  }

  untrain(features: readonly number[], label: string): void {
    const res = withTempFile(this.save(), (file) =>
      runCli(
        ["untrain", file, "--in", "-", "--out", "-"],
        featureRow(features, label) + "\n",
      ),
    );
    this.document = res.stdout.trimEnd();
  }

  classify(features: readonly number[], bleach = 0): string {
    const args = bleach ? ["--bleaching", String(bleach)] : [];
    return this.queryLine(args, featureRow(features));
  }

  classifyUnsupervised(features: readonly number[]): [string, number] {
    return JSON.parse(
      this.queryLine(["--mode", "unsupervised"], featureRow(features)),
    ) as [string, number];
  }

  rank(features: readonly number[]): string[] {
    return JSON.parse(
      this.queryLine(["--mode", "rank"], featureRow(features)),
    ) as string[];
  }

  score(features: readonly number[], bleach = 0): ScoreTable {
    const args = ["--mode", "score"];
    if (bleach) args.push("--bleaching", String(bleach));
    return JSON.parse(this.queryLine(args, featureRow(features))) as ScoreTable;
  }

  getMentalImage(label: string): number[][] {
    const images = this.inspect().mentalImages as
      | Record<string, number[][]>
      | undefined;
    const image = images?.[label];
    if (image === undefined) {
      throw new CliError(`no discriminators for label ${label}`, -1, "");
    }
    return image;
  }

  static load(text: string): Cluswisard {
    const model = new Cluswisard({
      addressSize: 1,
      minScore: 0,
      threshold: 1,
      discriminatorsLimit: 1,
    });
    model.adoptDocument(text, "cluswisard");
    const params = JSON.parse(model.save()).params;
    model.options = {
      addressSize: params.addressSize,
      minScore: params.minScore,
      threshold: params.threshold,
      discriminatorsLimit: params.discriminatorsLimit,
      completeAddressSize: params.completeAddressSize,
      seed: params.seed,
    };
    return model;
  }
}

// -- regression ----------------------------------------------------------

export interface RegressionWisardOptions {
  addressSize: number;
  mean?: string;
  power?: number;
  minZero?: number;
  minOne?: number;
  completeAddressSize?: boolean;
  seed?: number;
}

abstract class BoundRegressor extends BoundModel {
  train(features: readonly number[], target: number): void {
    this.trainRow(featureRow(features, undefined, target));
  }

  predict(features: readonly number[]): number {
    const line = this.queryLine([], featureRow(features));
    if (line === "NA") {
      throw new NoInformationError();
    }
    return Number(line);
  }
}

function meanArgs(o: {
  mean?: string;
  power?: number;
  minZero?: number;
  minOne?: number;
}): string[] {
  const args: string[] = [];
  if (o.mean !== undefined) args.push("--mean", o.mean);
  if (o.power !== undefined) args.push("--power", String(o.power));
  if (o.minZero !== undefined) args.push("--min-zero", String(o.minZero));
  if (o.minOne !== undefined) args.push("--min-one", String(o.minOne));
  return args;
}

export class RegressionWisard extends BoundRegressor {
  constructor(private options: RegressionWisardOptions) {
    super();
  }

  protected creationArgs(): string[] {
    const o = this.options;
    return [
      "--model",
      "rew",
      "--tuple-size",
      String(o.addressSize),
      ...meanArgs(o),
      ...boolFlag("--complete-address", o.completeAddressSize),
      ...flag("--seed", o.seed),
    ];
  }

  static load(text: string): RegressionWisard {
    const model = new RegressionWisard({ addressSize: 1 });
    model.adoptDocument(text, "regressionWisard");
    const params = JSON.parse(model.save()).params;
    model.options = {
      addressSize: params.addressSize,
      mean: params.mean,
      power: params.power,
      minZero: params.minZero,
      minOne: params.minOne,
      completeAddressSize: params.completeAddressSize,
      seed: params.seed,
    };
    return model;
  }
}

export interface ClusRegressionWisardOptions extends RegressionWisardOptions {
  minScore: number;
  threshold: number;
  limit: number;
}

export class ClusRegressionWisard extends BoundRegressor {
  constructor(private options: ClusRegressionWisardOptions) {
    super();
  }

  protected creationArgs(): string[] {
    const o = this.options;
    return [
      "--model",
      "crew",
      "--tuple-size",
      String(o.addressSize),
      "--min-score",
      String(o.minScore),
      "--threshold",
      String(o.threshold),
      "--limit",
      String(o.limit),
      ...meanArgs(o),
      ...boolFlag("--complete-address", o.completeAddressSize),
      ...flag("--seed", o.seed),
    ];
  }

  static load(text: string): ClusRegressionWisard {
    const model = new ClusRegressionWisard({
      addressSize: 1,
      minScore: 0,
      threshold: 1,
      limit: 1,
    });
    model.adoptDocument(text, "clusRegressionWisard");
    const params = JSON.parse(model.save()).params;
    model.options = {
      addressSize: params.addressSize,
      minScore: params.minScore,
      threshold: params.threshold,
      limit: params.limit,
      mean: params.mean,
      power: params.power,
      minZero: params.minZero,
      minOne: params.minOne,
      completeAddressSize: params.completeAddressSize,
      seed: params.seed,
    };
    return model;
  }
}
