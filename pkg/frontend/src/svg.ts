/** Minimal deterministic SVG builder: fixed precision, fixed styles, no
 * timestamps or random ids, so identical inputs give identical bytes. */

const fmt = (x: number): string => {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  rect(x: number, y: number, w: number, h: number, fill: string, extra = ""): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${extra}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  star(cx: number, cy: number, r: number, fill: string): void {
    const pts: string[] = [];
    for (let k = 0; k < 10; k++) {
      const rad = k % 2 === 0 ? r : 0.4 * r;
      const ang = (Math.PI * k) / 5 - Math.PI / 2;
      pts.push(`${fmt(cx + rad * Math.cos(ang))},${fmt(cy + rad * Math.sin(ang))}`);
    }
    this.parts.push(`<polygon points="${pts.join(" ")}" fill="${fill}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ""): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${attr}/>`,
    );
  }

  text(x: number, y: number, content: string, size = 12, anchor = "start"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" font-size="${size}" text-anchor="${anchor}">${content}</text>`,
    );
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

/** Affine map from a data range onto a pixel range. */
export function scale(d0: number, d1: number, p0: number, p1: number) {
  const span = d1 - d0 || 1;
  return (v: number): number => p0 + ((v - d0) / span) * (p1 - p0);
}

/** Blue-to-yellow heat ramp on [0, 1] (log-intensity maps). */
export function heatColor(t: number): string {
  const u = Math.min(1, Math.max(0, t));
  const stops: Array<[number, number, number]> = [
    [13, 8, 135],
    [126, 3, 168],
    [204, 71, 120],
    [248, 149, 64],
    [240, 249, 33],
  ];
  const x = u * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(x));
  const f = x - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const [r, g, b] = [0, 1, 2].map((k) => mix(stops[i][k], stops[i + 1][k]));
  return `rgb(${r},${g},${b})`;
}

export function axes(
  svg: Svg,
  box: { x0: number; y0: number; x1: number; y1: number },
  labels: { x: string; y: string; title?: string },
): void {
  svg.line(box.x0, box.y1, box.x1, box.y1, "#333");
  svg.line(box.x0, box.y0, box.x0, box.y1, "#333");
  svg.text((box.x0 + box.x1) / 2, box.y1 + 30, labels.x, 12, "middle");
  svg.text(box.x0 - 34, (box.y0 + box.y1) / 2, labels.y, 12, "middle");
  if (labels.title) svg.text((box.x0 + box.x1) / 2, box.y0 - 8, labels.title, 13, "middle");
}
