/**
 * Interface wiring: watch first, pick the display center, then annotate
 * while steering the virtual camera with the mouse. Two passes per video.
 */

import { AnnotationApi } from "./api.js";
import { ExtendedStrip, insideInnerRegion, repositionOnWrap } from "./geometry.js";
import { drawCameraCursor, drawOutline } from "./overlay.js";
import { StripPlayer } from "./player.js";
import { AnnotationDriver } from "./session.js";

const api = new AnnotationApi(
  (document.querySelector("#backend") as HTMLInputElement | null)?.value ??
    "http://127.0.0.1:8008",
);

const videoSelect = document.querySelector("#video") as HTMLSelectElement;
const annotatorInput = document.querySelector("#annotator") as HTMLInputElement;
const centerInput = document.querySelector("#center") as HTMLInputElement;
const watchButton = document.querySelector("#watch") as HTMLButtonElement;
const passButtons = [1, 2].map(
  (p) => document.querySelector(`#pass${p}`) as HTMLButtonElement,
);
const status = document.querySelector("#status") as HTMLElement;
const videoCanvas = document.querySelector("#strip") as HTMLCanvasElement;
const overlayCanvas = document.querySelector("#overlay") as HTMLCanvasElement;

let driver: AnnotationDriver | null = null;
let player: StripPlayer | null = null;
let mouse = { x: videoCanvas.width / 2, y: videoCanvas.height / 2 };

function strip(): ExtendedStrip {
  return {
    displayWidth: videoCanvas.width,
    centerLongitude: driver?.centerLongitude ?? 0,
  };
}

async function setup() {
  for (const id of await api.listVideos()) {
    const opt = document.createElement("option");
    opt.value = opt.textContent = id;
    videoSelect.append(opt);
  }
}

overlayCanvas.addEventListener("mousemove", (ev) => {
  const rect = overlayCanvas.getBoundingClientRect();
  let x = ((ev.clientX - rect.left) / rect.width) * overlayCanvas.width;
  const y = ((ev.clientY - rect.top) / rect.height) * overlayCanvas.height;
  if (!insideInnerRegion(strip(), x)) x = repositionOnWrap(strip(), x);
  mouse = { x, y };
});

watchButton.addEventListener("click", async () => {
  driver = new AnnotationDriver(api, videoSelect.value, annotatorInput.value || "anon");
  const meta = await driver.load();
  player = new StripPlayer(api, videoCanvas, driver.videoId, meta, strip());
  driver.beginWatch();
  status.textContent = "watching (full video, no seeking)";
  player.onFrame = (t) => driver?.watchTick(Math.min(t, meta.duration));
  player.onEnded = () => {
    status.textContent = "watched; choose a center longitude and start a pass";
    passButtons.forEach((b) => (b.disabled = false));
  };
  player.play();
});

for (const [i, button] of passButtons.entries()) {
  button.addEventListener("click", async () => {
    if (!driver || !player) return;
    const meta = driver.metadata!;
    driver.selectCenter(Number(centerInput.value) || 0);
    player.strip = strip();
    await driver.startPass((i + 1) as 1 | 2);
    status.textContent = `annotating pass ${i + 1}`;
    const octx = overlayCanvas.getContext("2d")!;
    player.onFrame = async (mediaTime) => {
      if (!driver) return;
      const { x, direction } = driver.onRenderedFrame(
        strip(),
        overlayCanvas.height,
        Math.min(mediaTime, meta.duration - 1e-6),
        mouse.x,
        mouse.y,
      );
      mouse.x = x;
      const outline = await api.fovOutline(
        direction.theta,
        direction.phi,
        meta.width,
        meta.height,
      );
      octx.clearRect(0, 0, overlayCanvas.width, overlayCanvas.height);
      drawOutline(octx, strip(), overlayCanvas.height, meta, outline.segments);
      drawCameraCursor(octx, strip(), overlayCanvas.height, direction);
    };
    player.onEnded = async () => {
      const result = await driver!.finish(meta.fps);
      status.textContent = `saved ${result.num_frames} frames to ${result.path}`;
    };
    player.play();
  });
}

setup();
