/** Client-side upload checks, run before any network traffic. */
export const MAX_UPLOAD_BYTES = 16 * 1024 * 1024;
const IMAGE_TYPES = new Set(["image/png", "image/jpeg", "image/bmp"]);
const IMAGE_EXTENSIONS = /\.(png|jpe?g|bmp)$/i;
export function checkUpload(name, type, sizeBytes) {
    const typeOk = IMAGE_TYPES.has(type) || (type === "" && IMAGE_EXTENSIONS.test(name));
    if (!typeOk) {
        return { ok: false, reason: "Only PNG, JPEG, or BMP images can be analyzed." };
    }
    if (sizeBytes > MAX_UPLOAD_BYTES) {
        return { ok: false, reason: "Images above 16 MiB are rejected by the server." };
    }
    if (sizeBytes === 0) {
        return { ok: false, reason: "This file is empty." };
    }
    return { ok: true };
}
