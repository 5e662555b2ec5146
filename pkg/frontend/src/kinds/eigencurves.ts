import { readCsv, column, extent } from "../table.js";
import { Svg, axes, scale } from "../svg.js";

const COLUMNS = [
  "rho",
  "lambda_sigma_over_gbar",
  "lambda_delta_over_gbar",
  "mix_cos",
  "mix_sin",
];

/**
 * Squeeze eigenvalues of the quadruplet decomposition (normalized to the
 * collective gain) and the mixing coefficients, versus the pump gain ratio;
 * the maximum of the larger eigenvalue (at rho = sqrt 2) is marked.
 */
export function renderEigencurves(path: string): string {
  const t = readCsv(path, COLUMNS);
  const rho = column(t, "rho");
  const lamS = column(t, "lambda_sigma_over_gbar");
  const lamD = column(t, "lambda_delta_over_gbar");
  const mixC = column(t, "mix_cos");
  const mixS = column(t, "mix_sin");

  const W = 640;
  const H = 460;
  const svg = new Svg(W, H);
  const box = { x0: 70, y0: 40, x1: W - 30, y1: H - 60 };

  const yMin = Math.min(-1.05, extent(lamD)[0]);
  const yMax = Math.max(1.2, extent(lamS)[1]) * 1.05;
  const [r0, r1] = extent(rho);
  const sx = scale(r0, r1, box.x0, box.x1);
  const sy = scale(yMin, yMax, box.y1, box.y0);

  const line = (ys: number[], color: string, dash = "") =>
    svg.polyline(rho.map((r, i) => [sx(r), sy(ys[i])] as [number, number]), color, 1.8, dash);

  svg.line(box.x0, sy(0), box.x1, sy(0), "#bbbbbb");
  line(lamS, "#1f77b4");
  line(lamD, "#d62728");
  line(mixC, "#2ca02c", "5,3");
  line(mixS, "#9467bd", "5,3");

  // mark the maximum of lambda_sigma/gbar (2/sqrt(3) at rho = sqrt 2)
  let iMax = 0;
  for (let i = 1; i < lamS.length; i++) if (lamS[i] > lamS[iMax]) iMax = i;
  svg.circle(sx(rho[iMax]), sy(lamS[iMax]), 5, "#1f77b4");
  svg.text(
    sx(rho[iMax]) + 8,
    sy(lamS[iMax]) - 8,
    `max ${lamS[iMax].toFixed(4)} @ rho=${rho[iMax].toFixed(3)}`,
    11,
  );

  svg.text(box.x1 - 10, box.y0 + 14, "lambda_sigma/gbar", 11, "end");
  svg.text(box.x1 - 10, box.y0 + 30, "lambda_delta/gbar", 11, "end");
  svg.text(box.x1 - 10, box.y0 + 46, "mix cos / sin (dashed)", 11, "end");
  axes(svg, box, { x: "rho = |g2|/|g1|", y: "normalized", title: "squeeze eigenvalues and mixing" });
  return svg.toString();
}
