import { describe, expect, it } from "vitest";

import {
  ExtendedStrip,
  innerBounds,
  insideInnerRegion,
  mapMouseToDirection,
  normalizeLongitude,
  pixelsPerDegree,
  repositionOnWrap,
  stripXsForEquirectX,
} from "../src/geometry.js";

const strip: ExtendedStrip = { displayWidth: 1080, centerLongitude: 0 }; // 2 px/degree
const H = 540;

describe("extended strip arithmetic", () => {
  it("540 degrees across the display width", () => {
    expect(pixelsPerDegree(strip)).toBe(2);
    expect(innerBounds(strip)).toEqual([180, 900]);
  });

  it("display center maps to the chosen center longitude at eye level", () => {
    expect(mapMouseToDirection(strip, H, 540, H / 2)).toEqual({ theta: 0, phi: 0 });
    const panned: ExtendedStrip = { displayWidth: 1080, centerLongitude: 135 };
    expect(mapMouseToDirection(panned, H, 540, H / 2)).toEqual({ theta: 0, phi: 135 });
  });

  it("inner left boundary is 180 degrees from the center", () => {
    // x = 180: phi = 0 + (180 - 540)/2 = -180 -> normalized 180
    expect(mapMouseToDirection(strip, H, 180, H / 2).phi).toBe(180);
  });

  it("top row is the north pole", () => {
    expect(mapMouseToDirection(strip, H, 540, 0).theta).toBe(90);
    expect(mapMouseToDirection(strip, H, 540, H).theta).toBe(-90);
  });

  it("rejects positions outside the inner region", () => {
    expect(() => mapMouseToDirection(strip, H, 179, 10)).toThrow(RangeError);
    expect(() => mapMouseToDirection(strip, H, 901, 10)).toThrow(RangeError);
  });

  it("repositions by a full turn of pixels, landing inside", () => {
    expect(repositionOnWrap(strip, 179)).toBe(899); // 179 + 720
    expect(repositionOnWrap(strip, 901)).toBe(181); // 901 - 720
    expect(repositionOnWrap(strip, 500)).toBe(500); // already inside
    expect(insideInnerRegion(strip, repositionOnWrap(strip, 150))).toBe(true);
  });

  it("reposition preserves the mapped direction exactly", () => {
    for (const x of [150, 910, 185.25, 899.75]) {
      const xr = repositionOnWrap(strip, x);
      const a = mapMouseToDirection(strip, H, repositionOnWrap(strip, xr), 123);
      const b = mapMouseToDirection(strip, H, xr, 123);
      expect(Math.abs(a.phi - b.phi)).toBeLessThan(1e-9);
      expect(a.theta).toBe(b.theta);
    }
  });

  it("normalizes longitudes into [0, 360)", () => {
    expect(normalizeLongitude(-30)).toBe(330);
    expect(normalizeLongitude(725)).toBe(5);
    expect(normalizeLongitude(0)).toBe(0);
  });

  it("margin content appears at two strip positions", () => {
    // with center 0, longitude 170 is 170 deg east: primary at 540+340=880,
    // duplicate a full turn west at 160 (inside the left margin's band)
    const xs = stripXsForEquirectX(strip, 170, 360);
    expect(xs).toEqual([880, 160]);
    // longitude 10 sits near the center: one position only
    expect(stripXsForEquirectX(strip, 10, 360)).toEqual([560]);
  });

  it("mouse motion across the seam gives a continuous direction stream", () => {
    // drift rightward past the inner boundary in half-pixel steps
    let x = 896;
    let prev = mapMouseToDirection(strip, H, x, 100).phi;
    let maxJump = 0;
    for (let i = 0; i < 40; i += 1) {
      x += 0.5;
      if (!insideInnerRegion(strip, x)) x = repositionOnWrap(strip, x);
      const phi = mapMouseToDirection(strip, H, x, 100).phi;
      let d = Math.abs(phi - prev) % 360;
      d = Math.min(d, 360 - d);
      maxJump = Math.max(maxJump, d);
      prev = phi;
    }
    expect(maxJump).toBeLessThanOrEqual(0.25 + 1e-12); // the actual mouse motion
  });
});
