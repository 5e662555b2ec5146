import { readCsv, column, extent } from "../table.js";
import { Svg, heatColor, axes, scale } from "../svg.js";

export interface FarfieldResult {
  svg: string;
  /** one heatmap cell per CSV data row (the rendering contract) */
  cellCount: number;
}

export interface FarfieldOptions {
  /** log-scale floor as a fraction of the maximum intensity */
  floor?: number;
}

/**
 * Far-field intensity heatmap on a log scale; hot spots exceed the
 * background by orders of magnitude, so the floor is configurable.
 */
export function renderFarfield(path: string, opts: FarfieldOptions = {}): FarfieldResult {
  const t = readCsv(path, ["qx", "omega", "intensity"]);
  const qx = column(t, "qx");
  const om = column(t, "omega");
  const inten = column(t, "intensity");

  const qxs = [...new Set(qx)].sort((a, b) => a - b);
  const oms = [...new Set(om)].sort((a, b) => a - b);
  const W = 640;
  const H = 560;
  const svg = new Svg(W, H);
  const box = { x0: 70, y0: 40, x1: W - 80, y1: H - 60 };

  const [, iMax] = extent(inten);
  const floorFrac = opts.floor ?? 1e-8;
  const lo = Math.log10(Math.max(iMax * floorFrac, 1e-300));
  const hi = Math.log10(Math.max(iMax, 1e-299));

  const sx = scale(qxs[0], qxs[qxs.length - 1], box.x0, box.x1);
  const sy = scale(oms[0], oms[oms.length - 1], box.y1, box.y0);
  const cw = (box.x1 - box.x0) / qxs.length;
  const ch = (box.y1 - box.y0) / oms.length;

  let cells = 0;
  for (let i = 0; i < t.rows.length; i++) {
    const v = Math.log10(Math.max(inten[i], 1e-300));
    const u = (v - lo) / (hi - lo || 1);
    svg.rect(sx(qx[i]) - cw / 2, sy(om[i]) - ch / 2, cw + 0.5, ch + 0.5, heatColor(u));
    cells += 1;
  }

  // colour bar
  const barX = W - 58;
  for (let k = 0; k < 120; k++) {
    svg.rect(barX, box.y1 - ((k + 1) * (box.y1 - box.y0)) / 120, 14, (box.y1 - box.y0) / 120 + 0.5, heatColor(k / 119));
  }
  svg.text(barX + 7, box.y0 - 8, "log I", 11, "middle");

  axes(svg, box, { x: "qx (um^-1)", y: "Omega (rad/fs)", title: "far-field intensity" });
  return { svg: svg.toString(), cellCount: cells };
}
