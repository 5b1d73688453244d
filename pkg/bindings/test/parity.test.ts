// The toy workflows driven through the bindings must reproduce what the
// CLI produces on the same fixtures, byte for byte.  Fixtures are chosen
// so classification never reaches a tie draw; that keeps row-at-a-time
// binding calls equivalent to one batch CLI invocation.

import { describe, test, expect, beforeAll, afterAll } from "vitest";
import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import {
  Cluswisard,
  ClusRegressionWisard,
  NoInformationError,
  RegressionWisard,
  Thermometer,
  Wisard,
} from "../src/index.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const fixtures = path.join(here, "fixtures");
let work: string;

beforeAll(() => {
  work = fs.mkdtempSync(path.join(os.tmpdir(), "parity-"));
});

afterAll(() => {
  fs.rmSync(work, { recursive: true, force: true });
});

function cli(args: string[], input = ""): string {
  const proc = spawnSync(process.env.RAMNET_CLI ?? "ramnet", args, {
    input,
    encoding: "utf8",
  });
  if (proc.status !== 0 && proc.status !== 3) {
    throw new Error(`ramnet ${args.join(" ")} failed: ${proc.stderr}`);
  }
  return proc.stdout;
}

interface CsvRow {
  values: number[];
  tail: string;
}

function readCsv(file: string): { header: string[]; rows: CsvRow[] } {
  const lines = fs
    .readFileSync(file, "utf8")
    .split("\n")
    .filter((line) => line.length > 0);
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => {
    const parts = line.split(",");
    return {
      values: parts.slice(0, -1).map(Number),
      tail: parts[parts.length - 1],
    };
  });
  return { header, rows };
}

function readLines(file: string): string[] {
  return fs
    .readFileSync(file, "utf8")
    .split("\n")
    .filter((line) => line.length > 0);
}

describe("classification workflow", () => {
  const thermoFlags = [
    "--encoder",
    "thermometer",
    "--size",
    "8",
    "--minimum",
    "0",
    "--maximum",
    "1",
  ];
  let bindingRows: { features: number[]; label: string }[];

  test("binarize output matches", () => {
    cli([
      "binarize",
      ...thermoFlags,
      "--label-col",
      "kind",
      "--in",
      path.join(fixtures, "letters.csv"),
      "--out",
      path.join(work, "cli-train.jsonl"),
    ]);

    const thermo = new Thermometer(8, 0, 1);
    const { rows } = readCsv(path.join(fixtures, "letters.csv"));
    bindingRows = rows.map((row) => ({
      features: thermo.transform(row.values),
      label: row.tail,
    }));
    const jsonl =
      bindingRows
        .map((row) => JSON.stringify({ features: row.features, label: row.label }))
        .join("\n") + "\n";
    fs.writeFileSync(path.join(work, "bind-train.jsonl"), jsonl);

    expect(jsonl).toBe(
      fs.readFileSync(path.join(work, "cli-train.jsonl"), "utf8"),
    );
  });

  test("trained wisard document matches", () => {
    cli([
      "train",
      "--model",
      "wisard",
      "--tuple-size",
      "4",
      "--seed",
      "42",
      "--in",
      path.join(work, "cli-train.jsonl"),
      "--out",
      path.join(work, "cli-model.json"),
    ]);

    const model = new Wisard({ addressSize: 4, seed: 42 });
    for (const row of bindingRows) {
      model.train(row.features, row.label);
    }
    fs.writeFileSync(path.join(work, "bind-model.json"), model.save() + "\n");

    expect(fs.readFileSync(path.join(work, "bind-model.json"), "utf8")).toBe(
      fs.readFileSync(path.join(work, "cli-model.json"), "utf8"),
    );
  });

  test("label and rank outputs match", () => {
    cli([
      "predict",
      path.join(work, "cli-model.json"),
      "--in",
      path.join(work, "cli-train.jsonl"),
      "--out",
      path.join(work, "cli-labels.txt"),
    ]);
    cli([
      "predict",
      path.join(work, "cli-model.json"),
      "--mode",
      "rank",
      "--in",
      path.join(work, "cli-train.jsonl"),
      "--out",
      path.join(work, "cli-rank.txt"),
    ]);

    const model = Wisard.load(
      fs.readFileSync(path.join(work, "bind-model.json"), "utf8"),
    );
    const labels = bindingRows.map((row) => model.classify(row.features));
    const ranks = bindingRows.map((row) => JSON.stringify(model.rank(row.features)));

    expect(labels.join("\n") + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-labels.txt"), "utf8"),
    );
    expect(ranks.join("\n") + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-rank.txt"), "utf8"),
    );
  });

  test("untrained first row matches", () => {
    const firstLine = readLines(path.join(work, "cli-train.jsonl"))[0];
    cli(
      [
        "untrain",
        path.join(work, "cli-model.json"),
        "--in",
        "-",
        "--out",
        path.join(work, "cli-untrained.json"),
      ],
      firstLine + "\n",
    );

    const model = Wisard.load(
      fs.readFileSync(path.join(work, "bind-model.json"), "utf8"),
    );
    model.untrain(bindingRows[0].features, bindingRows[0].label);

    expect(model.save() + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-untrained.json"), "utf8"),
    );
  });

  test("cluswisard document and cluster assignments match", () => {
    cli([
      "train",
      "--model",
      "clus",
      "--tuple-size",
      "2",
      "--min-score",
      "0.1",
      "--threshold",
      "5",
      "--limit",
      "2",
      "--seed",
      "7",
      "--in",
      path.join(work, "cli-train.jsonl"),
      "--out",
      path.join(work, "cli-clus.json"),
    ]);
    cli([
      "predict",
      path.join(work, "cli-clus.json"),
      "--mode",
      "unsupervised",
      "--in",
      path.join(work, "cli-train.jsonl"),
      "--out",
      path.join(work, "cli-clusters.txt"),
    ]);

    const model = new Cluswisard({
      addressSize: 2,
      minScore: 0.1,
      threshold: 5,
      discriminatorsLimit: 2,
      seed: 7,
    });
    for (const row of bindingRows) {
      model.train(row.features, row.label);
    }
    expect(model.save() + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-clus.json"), "utf8"),
    );

    const pairs = bindingRows.map((row) =>
      JSON.stringify(model.classifyUnsupervised(row.features)),
    );
    expect(pairs.join("\n") + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-clusters.txt"), "utf8"),
    );
  });
});

describe("regression workflow", () => {
  const thermoFlags = [
    "--encoder",
    "thermometer",
    "--size",
    "8",
    "--minimum",
    "0",
    "--maximum",
    "1",
  ];
  let bindingRows: { features: number[]; target: number }[];

  test("binarize output matches", () => {
    cli([
      "binarize",
      ...thermoFlags,
      "--target-col",
      "t",
      "--in",
      path.join(fixtures, "values.csv"),
      "--out",
      path.join(work, "cli-rtrain.jsonl"),
    ]);

    const thermo = new Thermometer(8, 0, 1);
    const { rows } = readCsv(path.join(fixtures, "values.csv"));
    bindingRows = rows.map((row) => ({
      features: thermo.transform(row.values),
      target: Number(row.tail),
    }));
    const jsonl =
      bindingRows
        .map((row) =>
          JSON.stringify({ features: row.features, target: row.target }),
        )
        .join("\n") + "\n";

    expect(jsonl).toBe(
      fs.readFileSync(path.join(work, "cli-rtrain.jsonl"), "utf8"),
    );
  });

  test("trained regression document matches", () => {
    cli([
      "train",
      "--model",
      "rew",
      "--tuple-size",
      "4",
      "--mean",
      "harmonic",
      "--seed",
      "5",
      "--in",
      path.join(work, "cli-rtrain.jsonl"),
      "--out",
      path.join(work, "cli-rew.json"),
    ]);

    const model = new RegressionWisard({
      addressSize: 4,
      mean: "harmonic",
      seed: 5,
    });
    for (const row of bindingRows) {
      model.train(row.features, row.target);
    }
    fs.writeFileSync(path.join(work, "bind-rew.json"), model.save() + "\n");

    expect(model.save() + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-rew.json"), "utf8"),
    );
  });

  test("predicted values match exactly", () => {
    cli([
      "predict",
      path.join(work, "cli-rew.json"),
      "--in",
      path.join(work, "cli-rtrain.jsonl"),
      "--out",
      path.join(work, "cli-preds.txt"),
    ]);

    const model = RegressionWisard.load(
      fs.readFileSync(path.join(work, "bind-rew.json"), "utf8"),
    );
    const cliValues = readLines(path.join(work, "cli-preds.txt")).map(Number);
    const bindValues = bindingRows.map((row) => model.predict(row.features));
    expect(bindValues).toEqual(cliValues);
  });

  test("no-information row agrees with the NA sentinel", () => {
    // One trained pattern: its complement misses every cell by design.
    const model = new RegressionWisard({ addressSize: 4, seed: 1 });
    model.train([1, 0, 1, 0, 1, 0, 1, 0], 2.5);
    const docPath = path.join(work, "bind-na.json");
    fs.writeFileSync(docPath, model.save() + "\n");
    const alien = [0, 1, 0, 1, 0, 1, 0, 1];

    const out = cli(
      ["predict", docPath, "--in", "-", "--out", "-"],
      JSON.stringify({ features: alien }) + "\n",
    );
    expect(out.split("\n")[0]).toBe("NA");
    expect(() => model.predict(alien)).toThrow(NoInformationError);
  });

  test("clustered regression document matches", () => {
    cli([
      "train",
      "--model",
      "crew",
      "--tuple-size",
      "2",
      "--min-score",
      "0.2",
      "--threshold",
      "4",
      "--limit",
      "3",
      "--mean",
      "geometric",
      "--seed",
      "9",
      "--in",
      path.join(work, "cli-rtrain.jsonl"),
      "--out",
      path.join(work, "cli-crew.json"),
    ]);

    const model = new ClusRegressionWisard({
      addressSize: 2,
      minScore: 0.2,
      threshold: 4,
      limit: 3,
      mean: "geometric",
      seed: 9,
    });
    for (const row of bindingRows) {
      model.train(row.features, row.target);
    }

    expect(model.save() + "\n").toBe(
      fs.readFileSync(path.join(work, "cli-crew.json"), "utf8"),
    );
  });
});
