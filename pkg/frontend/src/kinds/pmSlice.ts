import { readCsv, column, extent, readClusters, ClusterRecord } from "../table.js";
import { Svg, axes, scale } from "../svg.js";

const PUMP_COLORS = ["#1f77b4", "#d62728"];

export interface PmSliceOptions {
  lambdaNm?: number; // target wavelength; nearest available slice is used
  toleranceNm?: number;
}

/**
 * Angular phase-matching curves at one wavelength with cluster markers:
 * dots for the plus y-branch clusters, stars for the minus branch (two
 * independent families of entangled modes).
 */
export function renderPmSlice(
  surfacePaths: string[],
  clusterPath: string | undefined,
  opts: PmSliceOptions = {},
): string {
  const W = 560;
  const H = 520;
  const svg = new Svg(W, H);
  const box = { x0: 70, y0: 40, x1: W - 30, y1: H - 60 };

  interface P {
    tx: number;
    ty: number;
    lam: number;
    pump: number;
  }
  const pts: P[] = [];
  for (const path of surfacePaths) {
    const t = readCsv(path, ["lambda_um", "theta_x_rad", "theta_y_rad", "pump_id"]);
    const tx = column(t, "theta_x_rad");
    const ty = column(t, "theta_y_rad");
    const lam = column(t, "lambda_um");
    const pump = column(t, "pump_id");
    for (let i = 0; i < t.rows.length; i++) {
      pts.push({ tx: tx[i], ty: ty[i], lam: lam[i], pump: pump[i] });
    }
  }
  if (pts.length === 0) {
    svg.text(W / 2, H / 2, "no phase-matched points", 14, "middle");
    return svg.toString();
  }

  const lambdas = [...new Set(pts.map((p) => p.lam))].sort((a, b) => a - b);
  const target = opts.lambdaNm !== undefined ? opts.lambdaNm * 1e-3 : lambdas[0];
  const lamSlice = lambdas.reduce((best, l) =>
    Math.abs(l - target) < Math.abs(best - target) ? l : best,
  );
  const tolUm = (opts.toleranceNm ?? 2.0) * 1e-3;
  const slice = pts.filter((p) => Math.abs(p.lam - lamSlice) <= tolUm);

  const span = extent(slice.map((p) => Math.max(Math.abs(p.tx), Math.abs(p.ty))))[1] * 1.25 || 0.05;
  const sx = scale(-span, span, box.x0, box.x1);
  const sy = scale(-span, span, box.y1, box.y0);

  for (const p of slice) {
    svg.circle(sx(p.tx), sy(p.ty), 1.8, PUMP_COLORS[(p.pump - 1) % 2]);
  }

  let markers = 0;
  if (clusterPath) {
    const clusters = readClusters(clusterPath);
    for (const rec of clusters.clusters) {
      markers += drawClusterMarkers(svg, rec, lamSlice, tolUm, sx, sy);
    }
  }

  axes(svg, box, {
    x: "theta_x (rad)",
    y: "theta_y (rad)",
    title: `slice at ${(lamSlice * 1e3).toFixed(1)} nm (${markers} cluster markers)`,
  });
  return svg.toString();
}

function drawClusterMarkers(
  svg: Svg,
  rec: ClusterRecord,
  lamSlice: number,
  tolUm: number,
  sx: (v: number) => number,
  sy: (v: number) => number,
): number {
  let drawn = 0;
  for (const member of [rec.shared, rec.coupled_b, rec.coupled_c]) {
    if (Math.abs(member.lambda_um - lamSlice) > tolUm) continue;
    const x = sx(member.theta_x);
    const y = sy(member.theta_y);
    if (rec.y_branch === "minus") {
      svg.star(x, y, 7, "#111111");
    } else {
      svg.circle(x, y, 4.5, "#111111");
    }
    drawn += 1;
  }
  return drawn;
}
