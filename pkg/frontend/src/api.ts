/** Typed client for the annotation backend; the UI's only data path. */

export interface VideoMetadata {
  fps: number;
  width: number;
  height: number;
  num_frames: number;
  duration: number;
}

export interface OutlineResponse {
  /** polyline segments in equirectangular pixel coordinates */
  segments: [number, number][][];
}

export interface Sample {
  timestamp: number;
  theta: number;
  phi: number;
}

export interface FinalizeResult {
  path: string;
  num_frames: number;
  video_id: string;
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    const text = await resp.text();
    throw new Error(`${resp.status}: ${text || resp.statusText}`);
  }
  return (await resp.json()) as T;
}

export class AnnotationApi {
  constructor(private readonly base: string) {}

  async listVideos(): Promise<string[]> {
    const body = await asJson<{ videos: string[] }>(await fetch(`${this.base}/videos`));
    return body.videos;
  }

  videoMetadata(videoId: string): Promise<VideoMetadata> {
    return fetch(`${this.base}/videos/${videoId}`).then((r) => asJson<VideoMetadata>(r));
  }

  frameUrl(videoId: string, index: number): string {
    return `${this.base}/videos/${videoId}/frames/${index}`;
  }

  fovOutline(
    theta: number,
    phi: number,
    eqWidth: number,
    eqHeight: number,
    samplesPerEdge = 16,
  ): Promise<OutlineResponse> {
    const params = new URLSearchParams({
      theta: String(theta),
      phi: String(phi),
      eq_width: String(eqWidth),
      eq_height: String(eqHeight),
      samples_per_edge: String(samplesPerEdge),
    });
    return fetch(`${this.base}/fov_outline?${params}`).then((r) => asJson<OutlineResponse>(r));
  }

  async createSession(
    videoId: string,
    annotatorId: string,
    centerLongitude: number,
    passIndex: 1 | 2,
  ): Promise<string> {
    const resp = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        video_id: videoId,
        annotator_id: annotatorId,
        center_longitude: centerLongitude,
        pass_index: passIndex,
      }),
    });
    const body = await asJson<{ session_id: string }>(resp);
    return body.session_id;
  }

  async postSamples(sessionId: string, samples: Sample[]): Promise<void> {
    await asJson(
      await fetch(`${this.base}/sessions/${sessionId}/samples`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ samples }),
      }),
    );
  }

  finalize(sessionId: string, fps: number): Promise<FinalizeResult> {
    return fetch(`${this.base}/sessions/${sessionId}/finalize`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ fps }),
    }).then((r) => asJson<FinalizeResult>(r));
  }
}
