/** App shell: tabs, screens, and DOM wiring around the pure modules. */

import { ApiClient, ApiError, analysisErrorMessage } from "./api.js";
import { normalizePick, describePosition, type BodyMapSelection } from "./bodymap.js";
import { dayCurveModel } from "./chart.js";
import { formatRemaining, remainingSeconds, startCountdown, tickFires,
         type CountdownState } from "./countdown.js";
import { shouldNotify, type NotifyState } from "./notify.js";
import { resultCardModel, scoreText } from "./resultCard.js";
import { loadSettings, saveSettings, type Settings } from "./settings.js";
import { TtsbForm, minutesText, type TtsbFormValues } from "./ttsbForm.js";
import { ENVIRONMENTS, SKIN_TYPES, SPF_STOPS, spfLabel, type Profile,
         type UvObservation } from "./types.js";
import { nextPollDelayMs, uvBand } from "./uvscale.js";
import { checkUpload } from "./validate.js";

const api = new ApiClient("");
const POLL_BASE_MS = 10_000;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

// ---------------------------------------------------------------------------
// shared state

let settings: Settings = loadSettings(localStorage);
let notifyState: NotifyState = {
  threshold: settings.uvThreshold,
  lastNotifiedDate: localStorage.getItem("skinsafe.lastNotified"),
};
let countdown: CountdownState | null = null;
const storedAlarm = sessionStorage.getItem("skinsafe.alarmAt");
if (storedAlarm) countdown = startCountdown(storedAlarm);

// ---------------------------------------------------------------------------
// current UV screen

const uvScreen = el("section", { id: "screen-uv", class: "screen" });

function renderUvScreen(): void {
  uvScreen.replaceChildren(el("h2", {}, "Current UV"));
  const banner = el("div", { id: "uv-banner", class: "banner hidden" });
  const card = el("div", { id: "uv-card", class: "uv-card" }, "Loading UV data…");
  const chartBox = el("div", { id: "uv-chart" });
  uvScreen.append(
    banner, card,
    el("p", { class: "muted" },
       `Location: ${settings.lat.toFixed(2)}, ${settings.lon.toFixed(2)} (set in Settings)`),
    chartBox,
  );
  void refreshDayCurve(chartBox);
}

function showUvObservation(obs: UvObservation): void {
  const band = uvBand(obs.uv_index);
  const card = document.getElementById("uv-card");
  if (card) {
    card.replaceChildren(
      el("div", { class: "uv-value", style: `background:${band.color}` },
         obs.uv_index.toFixed(1)),
      el("div", {},
         el("div", { class: "uv-band" }, band.name),
         el("div", { class: "muted" },
            obs.condition ?? "", " · updated ", new Date(obs.at).toLocaleTimeString())),
    );
  }
  const banner = document.getElementById("uv-banner");
  const today = obs.at.slice(0, 10);
  const { fired, state } = shouldNotify(notifyState, obs.uv_index, today);
  notifyState = state;
  if (fired && banner) {
    localStorage.setItem("skinsafe.lastNotified", today);
    banner.textContent =
      `UV index ${obs.uv_index.toFixed(1)} has reached your threshold of ${notifyState.threshold}. ` +
      "Protect your skin before heading out.";
    banner.classList.remove("hidden");
  }
  const offline = document.getElementById("uv-offline");
  offline?.remove();
}

function showUvOffline(message: string): void {
  const card = document.getElementById("uv-card");
  if (card && !document.getElementById("uv-offline")) {
    card.append(el("div", { id: "uv-offline", class: "error" }, message));
  }
}

async function refreshDayCurve(host: HTMLElement): Promise<void> {
  try {
    const today = new Date().toISOString().slice(0, 10);
    const curve = await api.uvDay(settings.lat, settings.lon, today);
    const model = dayCurveModel(curve.hours, curve.samples, 640, 260);
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 640 260");
    svg.setAttribute("class", "chart");
    const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
    path.setAttribute("d", model.path);
    path.setAttribute("class", "curve");
    svg.append(path);
    for (const point of model.points) {
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(point.x));
      dot.setAttribute("cy", String(point.y));
      dot.setAttribute("r", "4");
      dot.setAttribute("fill", point.color);
      const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
      title.textContent = `${point.hour}:00 UV ${point.uv.toFixed(1)}`;
      dot.append(title);
      svg.append(dot);
    }
    for (const tick of model.yTicks) {
      const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", "4");
      label.setAttribute("y", String(tick.y + 4));
      label.setAttribute("class", "tick");
      label.textContent = tick.label;
      svg.append(label);
    }
    for (const tick of model.xTicks) {
      const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", String(tick.x - 14));
      label.setAttribute("y", "254");
      label.setAttribute("class", "tick");
      label.textContent = tick.label;
      svg.append(label);
    }
    host.replaceChildren(el("h3", {}, "Today, 6 AM – 6 PM"), svg);
  } catch (err) {
    host.replaceChildren(el("div", { class: "error" },
      err instanceof ApiError && err.status === 404
        ? "No UV data for this location."
        : "Day curve unavailable."));
  }
}

let pollFailures = 0;
function schedulePoll(): void {
  setTimeout(runPoll, nextPollDelayMs(POLL_BASE_MS, pollFailures));
}
async function runPoll(): Promise<void> {
  try {
    const obs = await api.uvCurrent(settings.lat, settings.lon);
    pollFailures = 0;
    showUvObservation(obs);
    seedBurnSliderOnce(obs.uv_index);
  } catch (err) {
    pollFailures += 1;
    showUvOffline(err instanceof ApiError && err.status === 404
      ? "No UV data for this location."
      : "UV service unreachable; retrying…");
  }
  schedulePoll();
}

// ---------------------------------------------------------------------------
// time-to-burn screen

const burnScreen = el("section", { id: "screen-burn", class: "screen" });
const form = new TtsbForm((body) => api.ttsb(body));
let burnValues: TtsbFormValues = {
  uvIndex: 5,
  skinRank: settings.skinRank,
  spfStop: 0,
  environment: null,
  altitudeFt: 0,
};
let uvSeeded = false;

function seedBurnSliderOnce(uv: number): void {
  if (uvSeeded) return;
  uvSeeded = true;
  burnValues = { ...burnValues, uvIndex: Math.round(uv * 10) / 10 };
  renderBurnScreen();
  form.setValues(burnValues);
}

function updateBurn(partial: Partial<TtsbFormValues>): void {
  burnValues = { ...burnValues, ...partial };
  renderBurnControls();
  form.setValues(burnValues);
}

function renderBurnScreen(): void {
  burnScreen.replaceChildren(
    el("h2", {}, "Time to Burn"),
    el("div", { id: "burn-controls" }),
    el("div", { id: "burn-result", class: "burn-result" }),
    el("div", { id: "burn-alarm" }),
  );
  renderBurnControls();
  renderBurnResult();
  renderAlarm();
}

function renderBurnControls(): void {
  const host = document.getElementById("burn-controls");
  if (!host) return;

  const uvSlider = el("input", {
    type: "range", min: "0", max: "14", step: "0.1",
    value: String(burnValues.uvIndex), id: "uv-slider",
  }) as HTMLInputElement;
  uvSlider.addEventListener("input", () =>
    updateBurn({ uvIndex: Number(uvSlider.value) }));

  const envGallery = el("div", { class: "gallery" });
  const noneButton = el("button", {
    class: burnValues.environment === null ? "chip selected" : "chip",
  }, "none");
  noneButton.addEventListener("click", () => updateBurn({ environment: null }));
  envGallery.append(noneButton);
  for (const env of ENVIRONMENTS) {
    const button = el("button", {
      class: burnValues.environment === env ? "chip selected" : "chip",
    }, env.replace("_", " "));
    button.addEventListener("click", () => updateBurn({ environment: env }));
    envGallery.append(button);
  }

  const skinGallery = el("div", { class: "gallery" });
  for (const skin of SKIN_TYPES) {
    const button = el("button", {
      class: burnValues.skinRank === skin.rank ? "chip skin selected" : "chip skin",
      title: skin.description,
    });
    button.append(el("span", { class: "swatch", style: `background:${skin.swatch}` }),
                  skin.name);
    button.addEventListener("click", () => updateBurn({ skinRank: skin.rank }));
    skinGallery.append(button);
  }

  const spfIndex = SPF_STOPS.indexOf(
    SPF_STOPS.find((stop) => stop === burnValues.spfStop) ?? 0);
  const spfSlider = el("input", {
    type: "range", min: "0", max: String(SPF_STOPS.length - 1), step: "1",
    value: String(spfIndex), id: "spf-slider",
  }) as HTMLInputElement;
  spfSlider.addEventListener("input", () =>
    updateBurn({ spfStop: SPF_STOPS[Number(spfSlider.value)] }));

  const altitude = el("input", {
    type: "number", min: "0", max: "30000", value: String(burnValues.altitudeFt),
    id: "altitude-input",
  }) as HTMLInputElement;
  altitude.addEventListener("change", () =>
    updateBurn({ altitudeFt: Number(altitude.value) || 0 }));

  const selectedSkin = SKIN_TYPES[burnValues.skinRank - 1];
  host.replaceChildren(
    el("label", {}, `UV index: ${burnValues.uvIndex.toFixed(1)}`), uvSlider,
    el("label", {}, "Environment"), envGallery,
    el("label", {}, `Skin type — ${selectedSkin.name}`),
    el("p", { class: "muted" }, selectedSkin.description),
    skinGallery,
    el("label", {}, `SPF: ${spfLabel(burnValues.spfStop)}`), spfSlider,
    el("label", {}, "Altitude (ft)"), altitude,
  );
}

function renderBurnResult(): void {
  const host = document.getElementById("burn-result");
  if (!host) return;
  const display = form.display;
  const headline = minutesText(display.response);
  host.replaceChildren(
    el("div", { class: "muted" }, "Estimated Time to Burn"),
    el("div", { class: "burn-minutes" },
       display.status === "loading" && !display.response ? "…" : headline),
    display.stale ? el("div", { class: "error" }, "offline — showing last value") : "",
  );
  const alarmHost = document.getElementById("burn-alarm");
  if (alarmHost) renderAlarm();
}

form.onChange(renderBurnResult);

function renderAlarm(): void {
  const host = document.getElementById("burn-alarm");
  if (!host) return;
  const response = form.display.response;
  const canAlarm = response?.kind === "burn_in" && response.alarm_at !== null;
  const button = el("button", canAlarm ? {} : { disabled: "disabled" }, "Set Alarm");
  button.addEventListener("click", () => {
    if (response?.alarm_at) {
      countdown = startCountdown(response.alarm_at);
      sessionStorage.setItem("skinsafe.alarmAt", response.alarm_at);
      renderAlarm();
    }
  });
  const pieces: Array<Node | string> = [button];
  if (countdown && !countdown.fired) {
    pieces.push(el("span", { id: "countdown", class: "countdown" },
                   formatRemaining(remainingSeconds(countdown, Date.now()))));
  }
  host.replaceChildren(...pieces);
}

setInterval(() => {
  if (!countdown) return;
  const node = document.getElementById("countdown");
  if (node) node.textContent = formatRemaining(remainingSeconds(countdown, Date.now()));
  if (tickFires(countdown, Date.now())) {
    sessionStorage.removeItem("skinsafe.alarmAt");
    const banner = el("div", { class: "banner" },
                      "Time is up — get out of the sun or reapply sunscreen.");
    document.getElementById("burn-alarm")?.append(banner);
  }
}, 1000);

// ---------------------------------------------------------------------------
// dermoscopy screen

const dermScreen = el("section", { id: "screen-derm", class: "screen" });
let selection: BodyMapSelection = { side: "front", x: 0.5, y: 0.5 };
let activeProfile: Profile | null = null;

async function renderDermScreen(): Promise<void> {
  dermScreen.replaceChildren(el("h2", {}, "Dermoscopy Profiles"),
                             el("div", { class: "muted" }, "Loading…"));
  try {
    const profiles = await api.listProfiles();
    const list = el("div", { class: "profile-list" });
    for (const profile of profiles) {
      const row = el("div", { class: "profile-row" });
      const open = el("button", { class: "profile-open" },
                      el("span", { class: "count-badge" }, String(profile.mole_count)),
                      profile.name);
      open.addEventListener("click", () => void openProfile(profile.id));
      const remove = el("button", { class: "danger" }, "Delete");
      remove.addEventListener("click", async () => {
        await api.deleteProfile(profile.id);
        void renderDermScreen();
      });
      row.append(open, remove);
      list.append(row);
    }
    const nameInput = el("input", { placeholder: "New profile name" }) as HTMLInputElement;
    const createButton = el("button", {}, "+ Create profile");
    createButton.addEventListener("click", async () => {
      if (nameInput.value.trim()) {
        await api.createProfile(nameInput.value.trim());
        void renderDermScreen();
      }
    });
    dermScreen.replaceChildren(
      el("h2", {}, "Dermoscopy Profiles"),
      list,
      el("div", { class: "row" }, nameInput, createButton),
    );
  } catch {
    dermScreen.replaceChildren(el("h2", {}, "Dermoscopy Profiles"),
                               el("div", { class: "error" }, "Server unreachable."));
  }
}

async function openProfile(id: string): Promise<void> {
  activeProfile = await api.getProfile(id);
  renderProfileView();
}

function bodyMapSvg(): SVGSVGElement {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", "0 0 100 200");
  svg.setAttribute("class", "bodymap");
  const silhouette = document.createElementNS("http://www.w3.org/2000/svg", "path");
  silhouette.setAttribute("d",
    "M50 8 a10 10 0 1 0 0.1 0 Z M38 30 h24 l6 40 -8 2 -2 -18 v60 l8 70 -12 2 " +
    "-4 -60 -4 60 -12 -2 8 -70 v-60 l-2 18 -8 -2 Z");
  silhouette.setAttribute("class", "silhouette");
  svg.append(silhouette);
  const marker = document.createElementNS("http://www.w3.org/2000/svg", "circle");
  marker.setAttribute("id", "pick-marker");
  marker.setAttribute("r", "3");
  marker.setAttribute("class", "marker");
  marker.setAttribute("cx", String(selection.x * 100));
  marker.setAttribute("cy", String(selection.y * 200));
  svg.append(marker);
  svg.addEventListener("click", (event) => {
    const rect = svg.getBoundingClientRect();
    const pick = normalizePick(rect.width, rect.height,
                               event.clientX - rect.left, event.clientY - rect.top);
    selection = { ...selection, ...pick };
    marker.setAttribute("cx", String(selection.x * 100));
    marker.setAttribute("cy", String(selection.y * 200));
    const label = document.getElementById("position-label");
    if (label) label.textContent = describePosition(selection);
  });
  return svg;
}

function renderProfileView(): void {
  if (!activeProfile) return;
  const profile = activeProfile;
  const back = el("button", {}, "← All profiles");
  back.addEventListener("click", () => {
    activeProfile = null;
    void renderDermScreen();
  });

  const moleList = el("div", { class: "mole-list" });
  for (const mole of profile.moles) {
    const result = mole.latest_result;
    moleList.append(el("div", { class: "mole-row" },
      el("span", {}, `${mole.body_side} (${mole.position.x.toFixed(2)}, ${mole.position.y.toFixed(2)})`),
      el("span", { class: `pill ${result?.lesion_class ?? ""}` },
         result?.lesion_class ?? "unanalyzed"),
    ));
  }

  const sideToggle = el("div", { class: "gallery" });
  for (const side of ["front", "back"] as const) {
    const button = el("button", {
      class: selection.side === side ? "chip selected" : "chip",
    }, side);
    button.addEventListener("click", () => {
      selection = { ...selection, side };
      renderProfileView();
    });
    sideToggle.append(button);
  }

  const fileInput = el("input", { type: "file", accept: "image/*" }) as HTMLInputElement;
  const feedback = el("div", { id: "analyze-feedback" });
  const analyzeButton = el("button", { class: "primary" }, "Analyze");
  analyzeButton.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      feedback.replaceChildren(el("div", { class: "error" }, "Choose an image first."));
      return;
    }
    const check = checkUpload(file.name, file.type, file.size);
    if (!check.ok) {
      feedback.replaceChildren(el("div", { class: "error" }, check.reason));
      return;
    }
    feedback.replaceChildren(el("div", { class: "muted" }, "Analyzing…"));
    try {
      const body = await api.analyze(file, file.name, {
        profileId: profile.id, bodySide: selection.side,
        x: selection.x, y: selection.y,
      });
      const model = resultCardModel(body);
      feedback.replaceChildren(el("div", {
        class: "result-card", style: `border-color:${model.accent}`,
      },
        el("h3", { style: `color:${model.accent}` }, model.lesionClass),
        el("div", {}, `stage I confidence: ${scoreText(model.stageOneScore)}`),
        el("div", {}, `stage II confidence: ${scoreText(model.stageTwoScore)}`),
        el("div", {}, `lesion area: ${model.areaPx} px`),
        model.advisoryText
          ? el("div", { class: "banner" }, model.advisoryText)
          : "",
      ));
      activeProfile = await api.getProfile(profile.id);
      renderProfileView();
      document.getElementById("analyze-feedback")?.replaceWith(feedback);
    } catch (err) {
      feedback.replaceChildren(el("div", { class: "error" },
        err instanceof ApiError ? analysisErrorMessage(err) : "Upload failed."));
    }
  });

  dermScreen.replaceChildren(
    back,
    el("h2", {}, profile.name),
    el("div", { class: "muted" }, `${profile.mole_count} image(s) in this profile`),
    moleList,
    el("h3", {}, "New analysis"),
    sideToggle,
    bodyMapSvg(),
    el("div", { id: "position-label", class: "muted" }, describePosition(selection)),
    el("div", { class: "row" }, fileInput, analyzeButton),
    feedback,
  );
}

// ---------------------------------------------------------------------------
// info + settings screens

const infoScreen = el("section", { id: "screen-info", class: "screen" },
  el("h2", {}, "About UV and skin checks"),
  el("p", {}, "The UV index measures the strength of sunburn-producing " +
    "ultraviolet radiation: 0–2 low, 3–5 moderate, 6–7 high, 8–10 very high, " +
    "11+ extreme. Burn time shortens as the index rises, and reflective " +
    "surroundings (snow, water, sand) shorten it further; shade and cloud " +
    "stretch it. Sunscreen multiplies your safe time by its protection factor."),
  el("p", {}, "Melanoma is the most dangerous common skin cancer, and early " +
    "detection dramatically improves outcomes. Photograph moles regularly " +
    "with consistent framing, watch for asymmetry, irregular borders, " +
    "multiple colors, and growth, and treat every abnormal result here as a " +
    "prompt to see a dermatologist — not as a diagnosis."),
  el("p", {}, "Workflow: check today's UV before going out, set a burn alarm " +
    "for your skin type and sunscreen, and keep one profile per person with " +
    "their mole images for follow-up."),
);

const settingsScreen = el("section", { id: "screen-settings", class: "screen" });

function renderSettingsScreen(): void {
  const skinGallery = el("div", { class: "gallery" });
  for (const skin of SKIN_TYPES) {
    const button = el("button", {
      class: settings.skinRank === skin.rank ? "chip skin selected" : "chip skin",
      title: skin.description,
    });
    button.append(el("span", { class: "swatch", style: `background:${skin.swatch}` }),
                  skin.name);
    button.addEventListener("click", () => {
      settings = { ...settings, skinRank: skin.rank };
      burnValues = { ...burnValues, skinRank: skin.rank };
      saveSettings(localStorage, settings);
      renderSettingsScreen();
    });
    skinGallery.append(button);
  }
  const threshold = el("input", {
    type: "range", min: "0", max: "10", step: "1",
    value: String(settings.uvThreshold),
  }) as HTMLInputElement;
  threshold.addEventListener("input", () => {
    settings = { ...settings, uvThreshold: Number(threshold.value) };
    notifyState = { ...notifyState, threshold: settings.uvThreshold };
    saveSettings(localStorage, settings);
    const label = document.getElementById("threshold-label");
    if (label) label.textContent = `UV notification threshold: ${settings.uvThreshold}`;
  });
  const lat = el("input", { type: "number", step: "0.01", value: String(settings.lat) }) as HTMLInputElement;
  const lon = el("input", { type: "number", step: "0.01", value: String(settings.lon) }) as HTMLInputElement;
  const applyLocation = el("button", {}, "Apply location");
  applyLocation.addEventListener("click", () => {
    settings = { ...settings, lat: Number(lat.value), lon: Number(lon.value) };
    saveSettings(localStorage, settings);
    renderUvScreen();
  });
  settingsScreen.replaceChildren(
    el("h2", {}, "Settings"),
    el("label", {}, "Default skin type"), skinGallery,
    el("label", { id: "threshold-label" },
       `UV notification threshold: ${settings.uvThreshold}`),
    threshold,
    el("label", {}, "Location"),
    el("div", { class: "row" }, lat, lon, applyLocation),
  );
}

// ---------------------------------------------------------------------------
// tabs

const SCREENS: Array<[string, string, HTMLElement]> = [
  ["uv", "Current UV", uvScreen],
  ["burn", "Time to Burn", burnScreen],
  ["derm", "Dermoscopy", dermScreen],
  ["info", "Info", infoScreen],
  ["settings", "Settings", settingsScreen],
];

function activate(tab: string): void {
  for (const [name, , screen] of SCREENS) {
    screen.classList.toggle("hidden", name !== tab);
  }
  document.querySelectorAll("nav button").forEach((button) => {
    button.classList.toggle("selected", button.getAttribute("data-tab") === tab);
  });
  if (tab === "derm") void (activeProfile ? renderProfileView() : renderDermScreen());
  if (tab === "settings") renderSettingsScreen();
}

function boot(): void {
  const nav = el("nav", {});
  for (const [name, label] of SCREENS) {
    const button = el("button", { "data-tab": name }, label);
    button.addEventListener("click", () => {
      location.hash = name;
      activate(name);
    });
    nav.append(button);
  }
  const root = document.getElementById("app");
  if (!root) return;
  root.append(el("header", {}, el("h1", {}, "skinsafe"), nav),
              ...SCREENS.map(([, , screen]) => screen));
  renderUvScreen();
  renderBurnScreen();
  form.setValues(burnValues);
  activate(location.hash.replace("#", "") || "uv");
  void runPoll();
}

boot();
