/**
 * Pixel arithmetic of the extended panoramic strip.
 *
 * The display shows 540 degrees of longitude: the full panorama plus a
 * 90-degree duplicated margin on each side, so the cursor can glide across
 * the 360-degree seam without a visual jump. The inner region
 * [W/6, 5W/6] covers exactly one full turn; positions in the margins
 * duplicate content from the opposite side.
 */

export interface ExtendedStrip {
  /** display width in pixels for 540 degrees of longitude */
  displayWidth: number;
  /** longitude shown at the display center, degrees in [0, 360) */
  centerLongitude: number;
}

export interface DirectionDeg {
  theta: number;
  phi: number;
}

export function normalizeLongitude(phi: number): number {
  return ((phi % 360) + 360) % 360;
}

export function pixelsPerDegree(strip: ExtendedStrip): number {
  return strip.displayWidth / 540;
}

/** Inclusive pixel bounds of the inner 360-degree region. */
export function innerBounds(strip: ExtendedStrip): [number, number] {
  return [strip.displayWidth / 6, (5 * strip.displayWidth) / 6];
}

export function insideInnerRegion(strip: ExtendedStrip, x: number): boolean {
  const [lo, hi] = innerBounds(strip);
  return x >= lo && x <= hi;
}

/**
 * Map a mouse position to the camera direction.
 *
 * phi = centerLongitude + (x - W/2) / (W/540), normalized;
 * theta = 90 - 180 * y / displayHeight.
 * The caller must reposition a wrapped cursor first: x outside the inner
 * 360-degree region throws.
 */
export function mapMouseToDirection(
  strip: ExtendedStrip,
  displayHeight: number,
  x: number,
  y: number,
): DirectionDeg {
  if (!insideInnerRegion(strip, x)) {
    const [lo, hi] = innerBounds(strip);
    throw new RangeError(
      `x=${x} outside the inner region [${lo}, ${hi}]; reposition first`,
    );
  }
  const phi = strip.centerLongitude + (x - strip.displayWidth / 2) / pixelsPerDegree(strip);
  const theta = 90 - (180 * y) / displayHeight;
  return { theta, phi: normalizeLongitude(phi) };
}

/**
 * Cursor reposition after crossing an inner boundary: shift by exactly 360
 * degrees worth of pixels, with the sign that lands back inside. The mapped
 * direction is identical before and after.
 */
export function repositionOnWrap(strip: ExtendedStrip, x: number): number {
  const fullTurn = 360 * pixelsPerDegree(strip);
  const [lo, hi] = innerBounds(strip);
  if (x < lo) return x + fullTurn;
  if (x > hi) return x - fullTurn;
  return x;
}

/**
 * Strip x positions (one or two) where an equirectangular x coordinate is
 * drawn: its primary position plus the duplicate when it falls inside a
 * margin's source band.
 */
export function stripXsForEquirectX(
  strip: ExtendedStrip,
  eqX: number,
  eqWidth: number,
): number[] {
  const phi = (360 * eqX) / eqWidth;
  const ppd = pixelsPerDegree(strip);
  let offset = phi - strip.centerLongitude;
  offset = ((offset % 360) + 360) % 360;
  if (offset > 180) offset -= 360; // primary position within +-180 of center
  const primary = strip.displayWidth / 2 + offset * ppd;
  const out = [primary];
  // the strip spans [-270, 270) around the center; content beyond +-90 from
  // an inner boundary also shows up in the opposite margin
  const duplicate =
    offset >= 90 ? primary - 360 * ppd : offset < -90 ? primary + 360 * ppd : NaN;
  if (!Number.isNaN(duplicate)) out.push(duplicate);
  return out;
}

/** Strip y for an equirectangular y coordinate at a given display height. */
export function stripYForEquirectY(eqY: number, eqHeight: number, displayHeight: number): number {
  return (eqY / eqHeight) * displayHeight;
}
