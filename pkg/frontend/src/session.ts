/**
 * Annotation session driver: the DOM-free core of the interface.
 *
 * Enforces the collection protocol: the annotator watches the full video
 * once (forward only, no seeking), then picks the display center longitude,
 * then annotates while the video plays again. During annotation every
 * rendered frame contributes one (media timestamp, direction) sample,
 * posted to the backend in order; recorded directions are absolute,
 * independent of the chosen center. Cursor wrap repositioning maps to the
 * identical direction, so the sample stream stays continuous across the
 * seam.
 */

import { AnnotationApi, VideoMetadata } from "./api.js";
import {
  DirectionDeg,
  ExtendedStrip,
  insideInnerRegion,
  mapMouseToDirection,
  repositionOnWrap,
} from "./geometry.js";

export type DriverState =
  | "idle"
  | "watching"
  | "watched"
  | "annotating"
  | "finalized";

export class AnnotationDriver {
  state: DriverState = "idle";
  centerLongitude = 0;
  metadata: VideoMetadata | null = null;

  private sessionId: string | null = null;
  private watchClock = 0;
  private lastSample: DirectionDeg | null = null;
  private postChain: Promise<void> = Promise.resolve();
  private postError: unknown = null;

  constructor(
    private readonly api: AnnotationApi,
    readonly videoId: string,
    readonly annotatorId: string,
  ) {}

  async load(): Promise<VideoMetadata> {
    this.metadata = await this.api.videoMetadata(this.videoId);
    return this.metadata;
  }

  /** First phase: watch the whole video once. Forward-only playback. */
  beginWatch(): void {
    if (this.state !== "idle") throw new Error(`cannot watch from state ${this.state}`);
    this.state = "watching";
    this.watchClock = 0;
  }

  /** Advance the watch clock; seeking backwards is not allowed. */
  watchTick(mediaTime: number): void {
    if (this.state !== "watching") throw new Error("not watching");
    if (mediaTime < this.watchClock) throw new Error("seeking is disabled during watch");
    this.watchClock = mediaTime;
    if (this.metadata && this.watchClock >= this.metadata.duration - 1e-9) {
      this.state = "watched";
    }
  }

  /** Pre-play center selection; display-only, recorded samples are absolute. */
  selectCenter(phi: number): void {
    if (this.state !== "watched") {
      throw new Error("watch the full video before annotating");
    }
    this.centerLongitude = ((phi % 360) + 360) % 360;
  }

  async startPass(passIndex: 1 | 2): Promise<void> {
    if (this.state !== "watched") {
      throw new Error("watch the full video before annotating");
    }
    this.sessionId = await this.api.createSession(
      this.videoId,
      this.annotatorId,
      this.centerLongitude,
      passIndex,
    );
    this.state = "annotating";
    this.lastSample = null;
  }

  /**
   * One rendered frame during annotation: map the cursor, record the
   * sample, and return the (possibly repositioned) cursor x the display
   * should continue from.
   */
  onRenderedFrame(
    strip: ExtendedStrip,
    displayHeight: number,
    mediaTime: number,
    mouseX: number,
    mouseY: number,
  ): { x: number; direction: DirectionDeg } {
    if (this.state !== "annotating" || this.sessionId === null) {
      throw new Error("no annotation pass in progress");
    }
    const x = insideInnerRegion(strip, mouseX) ? mouseX : repositionOnWrap(strip, mouseX);
    const direction = mapMouseToDirection(strip, displayHeight, x, mouseY);
    this.lastSample = direction;
    const sid = this.sessionId;
    // one batch per rendered frame, posts ordered per session
    this.postChain = this.postChain.then(() =>
      this.api
        .postSamples(sid, [{ timestamp: mediaTime, theta: direction.theta, phi: direction.phi }])
        .catch((err) => {
          this.postError = this.postError ?? err;
        }),
    );
    return { x, direction };
  }

  get currentDirection(): DirectionDeg | null {
    return this.lastSample;
  }

  /** Flush pending posts and persist the trajectory at the requested rate. */
  async finish(fps: number): Promise<{ path: string; num_frames: number }> {
    if (this.state !== "annotating" || this.sessionId === null) {
      throw new Error("no annotation pass in progress");
    }
    await this.postChain;
    if (this.postError) throw this.postError;
    const result = await this.api.finalize(this.sessionId, fps);
    this.state = "finalized";
    return result;
  }
}
