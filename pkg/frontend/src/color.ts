/**
 * Pure raster math for the density panels. Everything here is
 * canvas-free so the render path can be tested headlessly; the DOM layer
 * only copies the returned pixels onto a canvas.
 */

import type { DensityPayload } from "./types.js";

export type NormalizationMode = "per-panel" | "shared";

// white -> yellow -> orange -> red ramp, interpolated into a 256-entry LUT
const STOPS: Array<[number, number, number]> = [
  [255, 255, 255],
  [254, 237, 176],
  [253, 184, 99],
  [236, 112, 51],
  [189, 30, 30],
];

function buildLut(): Uint8ClampedArray {
  const lut = new Uint8ClampedArray(256 * 3);
  const segments = STOPS.length - 1;
  for (let i = 0; i < 256; i++) {
    const t = (i / 255) * segments;
    const k = Math.min(Math.floor(t), segments - 1);
    const f = t - k;
    for (let c = 0; c < 3; c++) {
      lut[i * 3 + c] = Math.round(STOPS[k][c] * (1 - f) + STOPS[k + 1][c] * f);
    }
  }
  return lut;
}

const LUT = buildLut();

/** Color for a normalized intensity t in [0, 1]. */
export function colorFor(t: number): [number, number, number] {
  const clamped = Math.min(Math.max(t, 0), 1);
  const i = Math.round(clamped * 255);
  return [LUT[i * 3], LUT[i * 3 + 1], LUT[i * 3 + 2]];
}

export function panelMax(payload: DensityPayload): number {
  let max = 0;
  for (const v of payload.values) {
    if (v > max) max = v;
  }
  return max;
}

/** One color ceiling across every present panel, for comparable scales. */
export function sharedMax(payloads: Array<DensityPayload | undefined>): number {
  let max = 0;
  for (const p of payloads) {
    if (p) max = Math.max(max, panelMax(p));
  }
  return max;
}

/**
 * RGBA pixels for one panel, nx wide and ny tall, with the outfield at
 * the top (payload iy increases away from home plate, canvas rows grow
 * downward). vmax is the density mapped to the hottest color.
 */
export function rasterize(payload: DensityPayload, vmax: number): Uint8ClampedArray {
  const { nx, ny, values } = payload;
  if (values.length !== nx * ny) {
    throw new Error(`payload claims ${nx}x${ny} but carries ${values.length} values`);
  }
  const out = new Uint8ClampedArray(nx * ny * 4);
  for (let row = 0; row < ny; row++) {
    const iy = ny - 1 - row;
    for (let ix = 0; ix < nx; ix++) {
      const v = values[ix * ny + iy];
      const t = vmax > 0 ? v / vmax : 0;
      const [r, g, b] = colorFor(t);
      const o = (row * nx + ix) * 4;
      out[o] = r;
      out[o + 1] = g;
      out[o + 2] = b;
      out[o + 3] = 255;
    }
  }
  return out;
}

/** Grid indices of the payload's highest-density node. */
export function argmaxCell(payload: DensityPayload): { ix: number; iy: number } {
  let best = 0;
  for (let i = 1; i < payload.values.length; i++) {
    if (payload.values[i] > payload.values[best]) best = i;
  }
  return { ix: Math.floor(best / payload.ny), iy: best % payload.ny };
}

/** Pixel offset (into a rasterize() buffer) of a grid cell. */
export function pixelOffset(payload: DensityPayload, ix: number, iy: number): number {
  const row = payload.ny - 1 - iy;
  return (row * payload.nx + ix) * 4;
}
