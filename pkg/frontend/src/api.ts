/** Thin typed client for the analysis server; the app does no domain math. */

import type {
  AnalysisResponse,
  Profile,
  TtsbRequest,
  TtsbResponse,
  UvDayCurve,
  UvObservation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function toError(resp: Response): Promise<ApiError> {
  let code = `HTTP${resp.status}`;
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") {
      code = body.error;
      detail = body.detail ?? detail;
    } else if (body && body.detail) {
      detail = JSON.stringify(body.detail);
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, code, detail);
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async json<T>(url: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + url, init);
    if (!resp.ok) throw await toError(resp);
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string; model_loaded: boolean; uv_source: string }> {
    return this.json("/healthz");
  }

  ttsb(body: TtsbRequest): Promise<TtsbResponse> {
    return this.json("/api/v1/ttsb", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  analyze(
    image: Blob,
    filename: string,
    mole?: { profileId: string; bodySide: "front" | "back"; x: number; y: number },
  ): Promise<AnalysisResponse> {
    const form = new FormData();
    form.append("image", image, filename);
    if (mole) {
      form.append("profile_id", mole.profileId);
      form.append("body_side", mole.bodySide);
      form.append("position_x", String(mole.x));
      form.append("position_y", String(mole.y));
    }
    return this.json("/api/v1/analyze", { method: "POST", body: form });
  }

  uvCurrent(lat: number, lon: number): Promise<UvObservation> {
    return this.json(`/api/v1/uv/current?lat=${lat}&lon=${lon}`);
  }

  uvDay(lat: number, lon: number, date: string): Promise<UvDayCurve> {
    return this.json(`/api/v1/uv/day?lat=${lat}&lon=${lon}&date=${date}`);
  }

  listProfiles(): Promise<Profile[]> {
    return this.json("/api/v1/profiles");
  }

  createProfile(name: string): Promise<Profile> {
    return this.json("/api/v1/profiles", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ name }),
    });
  }

  getProfile(id: string): Promise<Profile> {
    return this.json(`/api/v1/profiles/${id}`);
  }

  async deleteProfile(id: string): Promise<void> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/v1/profiles/${id}`, {
      method: "DELETE",
    });
    if (!resp.ok) throw await toError(resp);
  }
}

/** Actionable messages for pipeline failures (422 bodies). */
export function analysisErrorMessage(err: ApiError): string {
  switch (err.code) {
    case "NoLesionFound":
      return "No lesion was found in this image. Check focus and lighting, then retake.";
    case "LesionTouchesBorder":
      return "The lesion is cut off by the frame. Re-frame so the whole lesion is centered.";
    case "DegenerateLesion":
      return "The lesion is too small to analyze. Move the dermatoscope closer.";
    case "ImageTooSmall":
      return "The image resolution is too low for analysis.";
    case "UndecodableImage":
      return "This file is not a readable image. Upload a PNG, JPEG, or BMP.";
    case "PayloadTooLarge":
      return "The image is larger than 16 MiB. Export a smaller copy.";
    case "ModelNotLoaded":
      return "The analysis service has no model loaded. Try again later.";
    default:
      return `Analysis failed (${err.code}): ${err.detail}`;
  }
}
