export {
  CliError,
  NoInformationError,
  EXIT_OK,
  EXIT_USAGE,
  EXIT_WARNINGS,
  runCli,
} from "./core.js";
export {
  Wisard,
  Cluswisard,
  RegressionWisard,
  ClusRegressionWisard,
} from "./models.js";
export type {
  ScoreTable,
  WisardOptions,
  CluswisardOptions,
  RegressionWisardOptions,
  ClusRegressionWisardOptions,
} from "./models.js";
export {
  Thresholding,
  MeanThresholding,
  Thermometer,
  KernelCanvas,
} from "./binarizers.js";
