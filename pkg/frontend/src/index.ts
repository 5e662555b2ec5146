export { readCsv, column, readClusters, SchemaError } from "./table.js";
export { Svg, scale, heatColor } from "./svg.js";
export { renderSurface3d } from "./kinds/surface3d.js";
export { renderPmSlice } from "./kinds/pmSlice.js";
export { renderFarfield } from "./kinds/farfield.js";
export { renderEigencurves } from "./kinds/eigencurves.js";
export { renderWitnessDecay } from "./kinds/witnessDecay.js";
