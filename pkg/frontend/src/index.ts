export {
  BRANCH_HEADER,
  SchemaError,
  parseBranchCsv,
  parseConvergenceJson,
  parseVerifyJson,
  fittedExponent,
  type BranchPoint,
  type ConvergenceReport,
  type Stability,
  type VerifyCheck,
  type VerifyReport,
} from "./schema.js";
export { powerLawFit, type PowerFit } from "./fit.js";
export {
  analyzeBranch,
  renderBranchChart,
  STABILITY_COLORS,
  type BranchAnalysis,
  type BranchChartOptions,
  type BranchChartResult,
  type InteriorMax,
} from "./branchChart.js";
export {
  renderScalingChart,
  type ScalingChartOptions,
  type ScalingChartResult,
} from "./scalingChart.js";
export {
  renderConvergenceChart,
  type ConvergenceChartOptions,
} from "./convergenceChart.js";
