/**
 * Wire types and a small fetch client for the splforge HTTP service.
 *
 * The service holds one immutable feature model per process. All
 * configuration state lives here in the client; every call sends the
 * full decision set.
 */

export type Variability = 'mandatory' | 'optional' | 'group-member';
export type GroupKind = 'alt' | 'or';

export interface FeatureView {
  id: string;
  name: string;
  parent: string | null;
  variability: Variability;
  version: number;
  module: string | null;
  layers: string[] | null;
  group: string | null;
}

export interface GroupView {
  name: string;
  kind: GroupKind;
  parent: string;
  members: string[];
}

export interface ConstraintView {
  kind: 'requires' | 'excludes';
  source: string;
  target: string;
}

export interface ModelView {
  name: string;
  root: string;
  maxVersion: number;
  features: FeatureView[];
  groups: GroupView[];
  constraints: ConstraintView[];
}

/** A decision set: positive picks and explicit rejections, nothing implied. */
export interface Decisions {
  selected: string[];
  deselected: string[];
}

export interface PropagationView {
  forcedSelected: string[];
  forcedDeselected: string[];
  conflict: boolean;
  openFeatures: string[];
}

export interface ViolationView {
  kind: string;
  features: string[];
  message: string;
}

export interface ValidationView {
  valid: boolean;
  violations: ViolationView[];
}

export interface ModuleView {
  id: string;
  layers: string[];
}

export interface ManifestView {
  productName: string;
  modelName: string;
  version: number;
  features: string[];
  modules: ModuleView[];
  languages: string[];
  cycles: number;
}

export interface DeriveView {
  manifest: ManifestView;
  text: string;
}

/** Non-2xx answer from the service, or no answer at all (status 0). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly violations: ViolationView[] = [],
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SplClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async model(): Promise<ModelView> {
    return this.request<ModelView>('/api/model');
  }

  async count(decisions?: Partial<Decisions>, version?: number): Promise<number> {
    const params = new URLSearchParams();
    if (version !== undefined) params.set('version', String(version));
    if (decisions?.selected?.length) params.set('selected', decisions.selected.join(','));
    if (decisions?.deselected?.length) params.set('deselected', decisions.deselected.join(','));
    const query = params.toString();
    const body = await this.request<{ products: number }>(
      '/api/count' + (query ? `?${query}` : ''));
    return body.products;
  }

  async validate(decisions: Decisions, version?: number): Promise<ValidationView> {
    return this.post<ValidationView>('/api/validate', decisions, version);
  }

  async propagate(decisions: Decisions, version?: number): Promise<PropagationView> {
    return this.post<PropagationView>('/api/propagate', decisions, version);
  }

  async derive(decisions: Decisions, productName: string, version?: number): Promise<DeriveView> {
    return this.post<DeriveView>('/api/derive', { ...decisions, productName }, version);
  }

  private post<T>(path: string, payload: object, version?: number): Promise<T> {
    const body = version === undefined ? payload : { ...payload, version };
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const message =
        body && typeof body.error === 'string' ? body.error : `HTTP ${response.status}`;
      throw new ApiError(response.status, message, body?.violations ?? []);
    }
    return body as T;
  }
}
