/**
 * Live overlay: the backprojected camera FOV (cyan) and the camera-center
 * cursor (red circle), drawn on the extended strip including the duplicate
 * positions inside the margins.
 */

import { DirectionDeg, ExtendedStrip, pixelsPerDegree, stripXsForEquirectX, stripYForEquirectY } from "./geometry.js";

export interface EquirectDims {
  width: number;
  height: number;
}

/** Candidate horizontal shifts that place one 360-degree copy on screen. */
function copyShifts(strip: ExtendedStrip): number[] {
  const turn = 360 * pixelsPerDegree(strip);
  return [-turn, 0, turn];
}

export function drawOutline(
  ctx: CanvasRenderingContext2D,
  strip: ExtendedStrip,
  displayHeight: number,
  eq: EquirectDims,
  segments: [number, number][][],
): void {
  ctx.save();
  ctx.strokeStyle = "cyan";
  ctx.lineWidth = 2;
  for (const segment of segments) {
    if (segment.length < 2) continue;
    const first = segment[0]!;
    const anchors = stripXsForEquirectX(strip, first[0], eq.width);
    const primaryAnchor = anchors[0]!;
    for (const shift of copyShifts(strip)) {
      const x0 = primaryAnchor + shift;
      if (x0 < -eq.width || x0 > strip.displayWidth + eq.width) continue;
      ctx.beginPath();
      for (let i = 0; i < segment.length; i += 1) {
        const [ex, ey] = segment[i]!;
        // keep the segment rigid: offset every point relative to the anchor
        const dxDeg = ((((360 * (ex - first[0])) / eq.width) % 360) + 540) % 360 - 180;
        const x = x0 + dxDeg * pixelsPerDegree(strip);
        const y = stripYForEquirectY(ey, eq.height, displayHeight);
        if (i === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
      }
      ctx.stroke();
    }
  }
  ctx.restore();
}

export function drawCameraCursor(
  ctx: CanvasRenderingContext2D,
  strip: ExtendedStrip,
  displayHeight: number,
  direction: DirectionDeg,
  radius = 6,
): void {
  const y = ((90 - direction.theta) / 180) * displayHeight;
  const primary = stripXsForEquirectX(strip, direction.phi, 360);
  ctx.save();
  ctx.strokeStyle = "red";
  ctx.lineWidth = 2;
  for (const x of primary) {
    ctx.beginPath();
    ctx.arc(x, y, radius, 0, 2 * Math.PI);
    ctx.stroke();
  }
  ctx.restore();
}
