import { readCsv, column, extent } from "../table.js";
import { Svg, scale } from "../svg.js";

const SURFACE_COLUMNS = [
  "lambda_um",
  "omega_offset",
  "theta_x_rad",
  "theta_y_rad",
  "qx",
  "qy",
  "branch_id",
  "pump_id",
];

const PUMP_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/**
 * Orthographic projection of the emission point clouds in
 * (theta_x, theta_y, lambda) space, one colour per pump surface.
 */
export function renderSurface3d(paths: string[]): string {
  const W = 640;
  const H = 520;
  const svg = new Svg(W, H);

  interface P {
    x: number;
    y: number;
    lam: number;
    pump: number;
  }
  const pts: P[] = [];
  for (const path of paths) {
    const t = readCsv(path, SURFACE_COLUMNS);
    const tx = column(t, "theta_x_rad");
    const ty = column(t, "theta_y_rad");
    const lam = column(t, "lambda_um");
    const pump = column(t, "pump_id");
    for (let i = 0; i < t.rows.length; i++) {
      pts.push({ x: tx[i], y: ty[i], lam: lam[i], pump: pump[i] });
    }
  }
  if (pts.length === 0) {
    svg.text(W / 2, H / 2, "no phase-matched points", 14, "middle");
    return svg.toString();
  }

  const [lamMin, lamMax] = extent(pts.map((p) => p.lam));
  const [, thMax] = extent(pts.map((p) => Math.max(Math.abs(p.x), Math.abs(p.y))));

  // isometric-style projection: u = theta_x + 0.5 theta_y, v mixes lambda and theta_y
  const proj = (p: P): [number, number] => {
    const xn = p.x / thMax;
    const yn = p.y / thMax;
    const zn = (p.lam - lamMin) / (lamMax - lamMin || 1);
    return [xn + 0.45 * yn, zn + 0.3 * yn];
  };
  const [u0, u1] = extent(pts.map((p) => proj(p)[0]));
  const [v0, v1] = extent(pts.map((p) => proj(p)[1]));
  const sx = scale(u0, u1, 60, W - 30);
  const sy = scale(v0, v1, H - 60, 40);

  // far-to-near paint order: sort by theta_y so closer points overdraw
  const order = pts.map((_, i) => i).sort((a, b) => pts[a].y - pts[b].y);
  for (const i of order) {
    const [u, v] = proj(pts[i]);
    const color = PUMP_COLORS[(pts[i].pump - 1) % PUMP_COLORS.length];
    svg.circle(sx(u), sy(v), 1.6, color);
  }
  svg.text(W / 2, H - 16, "theta_x (projected)", 12, "middle");
  svg.text(26, H / 2, "lambda", 12, "middle");
  svg.text(W / 2, 20, "phase-matching surfaces", 13, "middle");
  return svg.toString();
}
