export { parseCsv, requireColumns } from "./csv";
export { viridis, viridisHex, luminance, quantileLevels, levelIndex } from "./color";
export { renderMetricsPanel, MetricsPanelSpec } from "./metricsPanel";
export {
    renderSimplexLandscape,
    projectBarycentric,
    readGrid,
    SimplexLandscapeSpec,
} from "./simplexLandscape";
export { parseArgs, runCli } from "./cli";
