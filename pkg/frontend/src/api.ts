import type {
  ErrorBody,
  HierarchyResponse,
  LayoutRequest,
  LayoutResponse,
  MstRequest,
  MstResponse,
  UploadResponse,
} from "./types.js";

/** Non-2xx response, carrying the service's JSON error body. */
export class ServiceError extends Error {
  readonly status: number;
  readonly body: ErrorBody;

  constructor(status: number, body: ErrorBody) {
    super(`${body.error}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** The four documented endpoints; the UI talks to nothing else. */
export interface ServiceApi {
  uploadDataset(file: Blob, name: string, format?: "csv" | "fvecs"): Promise<UploadResponse>;
  computeMst(datasetId: string, body: MstRequest): Promise<MstResponse>;
  getHierarchy(datasetId: string, eta?: string): Promise<HierarchyResponse>;
  computeLayout(datasetId: string, body: LayoutRequest, signal?: AbortSignal): Promise<LayoutResponse>;
}

/**
 * Thin typed client for the four service endpoints. The fetch function is
 * injectable so tests can count or redirect requests.
 */
export class ServiceClient implements ServiceApi {
  constructor(
    readonly base: string = "",
    private readonly fetchFn: FetchLike = (...a) => fetch(...a),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) throw new ServiceError(resp.status, body as ErrorBody);
    return body as T;
  }

  private postJson<T>(path: string, payload: unknown, signal?: AbortSignal): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
  }

  uploadDataset(file: Blob, name: string, format?: "csv" | "fvecs"): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file, name);
    if (format) form.append("format", format);
    return this.request<UploadResponse>("/datasets", { method: "POST", body: form });
  }

  computeMst(datasetId: string, body: MstRequest): Promise<MstResponse> {
    return this.postJson<MstResponse>(`/datasets/${datasetId}/mst`, body);
  }

  getHierarchy(datasetId: string, eta?: string): Promise<HierarchyResponse> {
    const q = eta === undefined ? "" : `?eta=${encodeURIComponent(eta)}`;
    return this.request<HierarchyResponse>(`/datasets/${datasetId}/hierarchy${q}`);
  }

  computeLayout(datasetId: string, body: LayoutRequest, signal?: AbortSignal): Promise<LayoutResponse> {
    return this.postJson<LayoutResponse>(`/datasets/${datasetId}/layout`, body, signal);
  }
}
