/**
 * Density panel: canvas raster plus a field outline. The pixel math
 * lives in color.ts; this module only owns DOM and drawing, and every
 * canvas call is guarded so the logic also runs where 2d contexts are
 * unavailable (headless tests).
 */

import { rasterize } from "./color.js";
import type { DensityPayload } from "./types.js";

export interface Panel {
  root: HTMLElement;
  title: HTMLElement;
  canvas: HTMLCanvasElement;
  notice: HTMLElement;
}

export function createPanel(titleText: string, width = 320, height = 320): Panel {
  const root = document.createElement("div");
  root.className = "panel";

  const title = document.createElement("h3");
  title.textContent = titleText;

  const canvas = document.createElement("canvas");
  canvas.width = width;
  canvas.height = height;

  const notice = document.createElement("div");
  notice.className = "panel-notice";
  notice.textContent = "insufficient data";
  notice.style.display = "none";

  root.append(title, canvas, notice);
  return { root, title, canvas, notice };
}

export function renderPanel(panel: Panel, payload: DensityPayload | undefined, vmax: number): void {
  if (!payload) {
    panel.canvas.style.visibility = "hidden";
    panel.notice.style.display = "block";
    return;
  }
  panel.canvas.style.visibility = "visible";
  panel.notice.style.display = "none";

  const ctx = panel.canvas.getContext("2d");
  if (!ctx) return; // headless environment: DOM state above is still correct

  const pixels = rasterize(payload, vmax);
  const raster = document.createElement("canvas");
  raster.width = payload.nx;
  raster.height = payload.ny;
  const rctx = raster.getContext("2d");
  if (!rctx) return;
  const image = rctx.createImageData(payload.nx, payload.ny);
  image.data.set(pixels);
  rctx.putImageData(image, 0, 0);

  ctx.clearRect(0, 0, panel.canvas.width, panel.canvas.height);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(raster, 0, 0, panel.canvas.width, panel.canvas.height);
  drawFieldOutline(ctx, panel.canvas, payload);
}

/** Foul lines and an outfield arc in world coordinates (feet, home at origin). */
function drawFieldOutline(
  ctx: CanvasRenderingContext2D,
  canvas: HTMLCanvasElement,
  payload: DensityPayload,
): void {
  const [xMin, xMax] = payload.x_range;
  const [yMin, yMax] = payload.y_range;
  const px = (x: number) => ((x - xMin) / (xMax - xMin)) * canvas.width;
  const py = (y: number) => ((yMax - y) / (yMax - yMin)) * canvas.height;

  ctx.strokeStyle = "rgba(60, 60, 60, 0.55)";
  ctx.lineWidth = 1.25;

  const foul = 300; // feet along each line, drawing only
  ctx.beginPath();
  ctx.moveTo(px(-foul * Math.SQRT1_2), py(foul * Math.SQRT1_2));
  ctx.lineTo(px(0), py(0));
  ctx.lineTo(px(foul * Math.SQRT1_2), py(foul * Math.SQRT1_2));
  ctx.stroke();

  // outfield arc, 330 ft from home between the foul lines
  ctx.beginPath();
  const r = 330;
  for (let a = -45; a <= 45; a += 3) {
    const rad = (a * Math.PI) / 180;
    const x = r * Math.sin(rad);
    const y = r * Math.cos(rad);
    if (a === -45) ctx.moveTo(px(x), py(y));
    else ctx.lineTo(px(x), py(y));
  }
  ctx.stroke();

  // infield wedge hint
  ctx.beginPath();
  const r2 = 95;
  for (let a = -45; a <= 45; a += 5) {
    const rad = (a * Math.PI) / 180;
    if (a === -45) ctx.moveTo(px(r2 * Math.sin(rad)), py(r2 * Math.cos(rad)));
    else ctx.lineTo(px(r2 * Math.sin(rad)), py(r2 * Math.cos(rad)));
  }
  ctx.stroke();
}
