/**
 * Extended-strip playback on a canvas.
 *
 * Frames are fetched once per index; the 540-degree view is three copies of
 * the same bitmap drawn side by side (one full turn apart), so the margins
 * cost no extra transfer. Playback is forward-only and paced by the wall
 * clock against the video's frame rate.
 */

import { AnnotationApi, VideoMetadata } from "./api.js";
import { ExtendedStrip, pixelsPerDegree, stripXsForEquirectX } from "./geometry.js";

export class StripPlayer {
  private frames = new Map<number, HTMLImageElement>();
  onFrame: ((mediaTime: number, index: number) => void) | null = null;
  onEnded: (() => void) | null = null;
  private playing = false;

  constructor(
    private readonly api: AnnotationApi,
    private readonly canvas: HTMLCanvasElement,
    private readonly videoId: string,
    private readonly meta: VideoMetadata,
    public strip: ExtendedStrip,
  ) {}

  private frameImage(index: number): HTMLImageElement {
    let img = this.frames.get(index);
    if (!img) {
      img = new Image();
      img.src = this.api.frameUrl(this.videoId, index);
      this.frames.set(index, img);
    }
    return img;
  }

  drawFrame(index: number): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const img = this.frameImage(index);
    if (!img.complete) {
      img.onload = () => this.drawFrame(index);
      return;
    }
    const turn = 360 * pixelsPerDegree(this.strip);
    // left edge of the copy whose content starts at longitude 0
    const anchor = stripXsForEquirectX(this.strip, 0, this.meta.width)[0]!;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    for (const shift of [-turn, 0, turn]) {
      ctx.drawImage(img, anchor + shift, 0, turn, this.canvas.height);
    }
  }

  /** Forward-only playback; stops at the last frame. */
  play(): void {
    if (this.playing) return;
    this.playing = true;
    const start = performance.now();
    const step = () => {
      if (!this.playing) return;
      const mediaTime = (performance.now() - start) / 1000;
      const index = Math.min(
        Math.floor(mediaTime * this.meta.fps),
        this.meta.num_frames - 1,
      );
      this.drawFrame(index);
      this.onFrame?.(mediaTime, index);
      if (mediaTime >= this.meta.duration) {
        this.playing = false;
        this.onEnded?.();
        return;
      }
      requestAnimationFrame(step);
    };
    requestAnimationFrame(step);
  }

  stop(): void {
    this.playing = false;
  }
}
