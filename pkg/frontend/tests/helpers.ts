/** Test doubles: an in-memory API the client talks to, and a Storage stub. */

export interface RecordedRequest {
  method: string;
  path: string;
  query: URLSearchParams;
  headers: Record<string, string>;
  body: string | FormData | null;
}

export interface CannedReply {
  status: number;
  json: unknown;
}

type Handler = CannedReply | ((request: RecordedRequest) => CannedReply);

export class FakeServer {
  readonly requests: RecordedRequest[] = [];
  private readonly routes = new Map<string, Handler>();

  on(method: string, path: string, reply: Handler): void {
    this.routes.set(`${method} ${path}`, reply);
  }

  /** Requests seen for one route, oldest first. */
  seen(method: string, path: string): RecordedRequest[] {
    return this.requests.filter((r) => r.method === method && r.path === path);
  }

  fetch = (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://fake");
    const method = init?.method ?? "GET";
    const headers: Record<string, string> = {};
    for (const [name, value] of Object.entries(init?.headers ?? {})) {
      headers[name.toLowerCase()] = value as string;
    }
    const rawBody = init?.body;
    const request: RecordedRequest = {
      method,
      path: url.pathname,
      query: url.searchParams,
      headers,
      body: rawBody instanceof FormData ? rawBody : typeof rawBody === "string" ? rawBody : null,
    };
    this.requests.push(request);
    const handler = this.routes.get(`${method} ${url.pathname}`);
    if (handler === undefined) {
      return Promise.resolve(jsonResponse(404, { code: "not_found", message: `no route ${method} ${url.pathname}`, details: [] }));
    }
    const reply = typeof handler === "function" ? handler(request) : handler;
    return Promise.resolve(jsonResponse(reply.status, reply.json));
  };
}

function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export class MemoryStorage implements Storage {
  private data = new Map<string, string>();

  get length(): number {
    return this.data.size;
  }

  clear(): void {
    this.data.clear();
  }

  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }

  key(index: number): string | null {
    return Array.from(this.data.keys())[index] ?? null;
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }

  setItem(key: string, value: string): void {
    this.data.set(key, String(value));
  }
}

export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

// -- canned payload builders, shaped like the server's serializer ----------

export function money(amount: number, display: string) {
  return { amount, display };
}

export function percent(basisPoints: number, display: string) {
  return { basis_points: basisPoints, display };
}

export function sampleActivity(overrides: Partial<Record<string, unknown>> = {}) {
  return {
    id: "act-1",
    program_id: "prog-1",
    desa_id: "desa-1",
    title: "Rabat beton jalan lingkungan",
    budget: money(250_000_000, "Rp250.000.000"),
    start_period: 1,
    end_period: 20,
    tranche_shares: [4000, 3000, 3000],
    ...overrides,
  };
}

export function sampleReport(overrides: Partial<Record<string, unknown>> = {}) {
  return {
    id: "rep-1",
    activity_id: "act-1",
    period: 2,
    physical: percent(1500, "15%"),
    financial_absorbed: money(20_000_000, "Rp20.000.000"),
    labor_count: 12,
    submitted_by: "petugas1",
    submitted_at: "2014-01-19T00:00:00+00:00",
    superseded: false,
    photos: [],
    ...overrides,
  };
}

export function sampleStages() {
  return [
    {
      stage_number: 1,
      planned_amount: money(100_000_000, "Rp100.000.000"),
      actual_amount: money(100_000_000, "Rp100.000.000"),
      disbursed_on: "2014-01-13",
      status: "disbursed",
    },
    {
      stage_number: 2,
      planned_amount: money(75_000_000, "Rp75.000.000"),
      actual_amount: null,
      disbursed_on: null,
      status: "planned",
    },
    {
      stage_number: 3,
      planned_amount: money(75_000_000, "Rp75.000.000"),
      actual_amount: null,
      disbursed_on: null,
      status: "planned",
    },
  ];
}
