/** Thin typed client for the analysis server; the app does no domain math. */
export class ApiError extends Error {
    constructor(status, code, detail) {
        super(`${code}: ${detail}`);
        this.status = status;
        this.code = code;
        this.detail = detail;
    }
}
async function toError(resp) {
    let code = `HTTP${resp.status}`;
    let detail = resp.statusText;
    try {
        const body = await resp.json();
        if (body && typeof body.error === "string") {
            code = body.error;
            detail = body.detail ?? detail;
        }
        else if (body && body.detail) {
            detail = JSON.stringify(body.detail);
        }
    }
    catch {
        // non-JSON error body; keep the status text
    }
    return new ApiError(resp.status, code, detail);
}
export class ApiClient {
    constructor(baseUrl = "", fetchImpl = (url, init) => fetch(url, init)) {
        this.baseUrl = baseUrl;
        this.fetchImpl = fetchImpl;
    }
    async json(url, init) {
        const resp = await this.fetchImpl(this.baseUrl + url, init);
        if (!resp.ok)
            throw await toError(resp);
        return (await resp.json());
    }
    health() {
        return this.json("/healthz");
    }
    ttsb(body) {
        return this.json("/api/v1/ttsb", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    analyze(image, filename, mole) {
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
    uvCurrent(lat, lon) {
        return this.json(`/api/v1/uv/current?lat=${lat}&lon=${lon}`);
    }
    uvDay(lat, lon, date) {
        return this.json(`/api/v1/uv/day?lat=${lat}&lon=${lon}&date=${date}`);
    }
    listProfiles() {
        return this.json("/api/v1/profiles");
    }
    createProfile(name) {
        return this.json("/api/v1/profiles", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ name }),
        });
    }
    getProfile(id) {
        return this.json(`/api/v1/profiles/${id}`);
    }
    async deleteProfile(id) {
        const resp = await this.fetchImpl(`${this.baseUrl}/api/v1/profiles/${id}`, {
            method: "DELETE",
        });
        if (!resp.ok)
            throw await toError(resp);
    }
}
/** Actionable messages for pipeline failures (422 bodies). */
export function analysisErrorMessage(err) {
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
