import { readCsv, column, extent } from "../table.js";
import { Svg, axes, scale } from "../svg.js";

const COLUMNS = [
  "z_um",
  "var_fI",
  "var_fII",
  "var_fIII",
  "var_fIV",
  "predicted_sigma",
  "predicted_delta",
];

/**
 * Witness variances versus propagation length on a log scale, with the
 * predicted 2 e^{-2 Lambda z} decays dashed on top.
 */
export function renderWitnessDecay(path: string): string {
  const t = readCsv(path, COLUMNS);
  const z = column(t, "z_um");

  const W = 640;
  const H = 460;
  const svg = new Svg(W, H);
  const box = { x0: 70, y0: 40, x1: W - 30, y1: H - 60 };

  const series: Array<[string, string, string]> = [
    ["var_fI", "#1f77b4", ""],
    ["var_fII", "#d62728", ""],
    ["var_fIII", "#2ca02c", ""],
    ["var_fIV", "#9467bd", ""],
    ["predicted_sigma", "#17becf", "6,4"],
    ["predicted_delta", "#bcbd22", "6,4"],
  ];
  const values = series.map(([name]) => column(t, name));
  const positive = values.flat().filter((v) => v > 0);
  const [vMin, vMax] = extent(positive);
  const sx = scale(z[0], z[z.length - 1], box.x0, box.x1);
  const sy = scale(Math.log10(vMin), Math.log10(vMax), box.y1, box.y0);

  series.forEach(([name, color, dash], k) => {
    const pts = z
      .map((zz, i) => [zz, values[k][i]] as [number, number])
      .filter(([, v]) => v > 0)
      .map(([zz, v]) => [sx(zz), sy(Math.log10(v))] as [number, number]);
    svg.polyline(pts, color, dash ? 1.4 : 1.8, dash);
    svg.text(box.x1 - 10, box.y0 + 14 + 15 * k, name, 10, "end");
  });

  axes(svg, box, { x: "z (um)", y: "log10 variance", title: "witness decay" });
  return svg.toString();
}
