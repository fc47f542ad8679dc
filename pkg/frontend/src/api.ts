/**
 * Typed client for the monitoring API.
 *
 * Every method maps to one endpoint under /api/v1 and returns the payload
 * unchanged. Figures (money, percent) arrive as {amount|basis_points,
 * display} pairs; this module never transforms them, so whatever the UI
 * shows is exactly what the server sent.
 */

export interface MoneyJson {
  amount: number;
  display: string;
}

export interface PercentJson {
  basis_points: number;
  display: string;
}

export interface FieldProblem {
  field: string;
  code: string;
  message: string;
}

export interface ErrorBody {
  code: string;
  message: string;
  details?: FieldProblem[];
}

export interface LoginResponse {
  token: string;
  role: Role;
  username: string;
  expires_at: string;
}

export type Role = "admin" | "petugas" | "kasatker";

export interface ProgramJson {
  id: string;
  kind: string;
  fiscal_year: number;
  name: string;
}

export interface KecamatanJson {
  id: string;
  name: string;
}

export interface DesaJson {
  id: string;
  kecamatan_id: string;
  name: string;
}

export interface ActivityJson {
  id: string;
  program_id: string;
  desa_id: string;
  title: string;
  budget: MoneyJson;
  start_period: number;
  end_period: number;
  tranche_shares: number[];
}

export interface PhotoJson {
  id: string;
  report_id: string;
  content_hash: string;
  caption: string;
  achieved_at_percent: PercentJson;
  media_type: string;
}

export interface ReportJson {
  id: string;
  activity_id: string;
  period: number;
  physical: PercentJson;
  financial_absorbed: MoneyJson;
  labor_count: number;
  submitted_by: string;
  submitted_at: string;
  superseded: boolean;
  photos: PhotoJson[];
}

export interface TargetEntryJson {
  period: number;
  planned_physical: PercentJson;
  planned_financial: MoneyJson;
}

export interface StageJson {
  stage_number: number;
  status: "planned" | "disbursed";
  planned_amount: MoneyJson;
  actual_amount: MoneyJson | null;
  disbursed_on: string | null;
}

export interface ScopeRef {
  kind: string;
  id: string;
}

export interface SummaryJson {
  scope: ScopeRef;
  name: string;
  as_of_period: number;
  weighted_physical: PercentJson;
  financial_planned: MoneyJson;
  financial_realized: MoneyJson;
  activity_count: number;
  missing_report_count: number;
  breakdown: Array<{
    scope: ScopeRef;
    name: string;
    weighted_physical: PercentJson;
    financial_planned: MoneyJson;
    financial_realized: MoneyJson;
    activity_count: number;
    missing_report_count: number;
  }>;
}

export interface SCurvePoint {
  period: number;
  planned_physical: PercentJson;
  realized_physical: PercentJson | null;
  planned_financial: MoneyJson;
  realized_financial: MoneyJson | null;
}

export interface SCurveJson {
  activity_id: string;
  title: string;
  through: number;
  points: SCurvePoint[];
}

export interface StageChartRowJson {
  stage_number: number;
  planned: MoneyJson;
  realized: MoneyJson;
}

export interface StageChartJson {
  activity_id: string;
  title: string;
  rows: StageChartRowJson[];
}

export interface LateFlagJson {
  activity_id: string;
  activity_title: string;
  period: number;
  days_late: number;
  status: "on_time" | "late" | "missing";
}

export interface LateReportsJson {
  as_of: string;
  grace_days: number;
  flags: LateFlagJson[];
}

export interface ReportDraftBody {
  period: number;
  physical: number;
  financial_absorbed: number;
  labor_count: number;
  submitted_at?: string;
  supersede?: boolean;
}

/** Thrown for any non-2xx response; carries the parsed error envelope. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }

  problemsFor(field: string): FieldProblem[] {
    return (this.body.details ?? []).filter((d) => d.field === field);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown; form?: FormData; query?: Record<string, string> } = {},
  ): Promise<T> {
    let url = this.baseUrl + "/api/v1" + path;
    if (options.query) {
      url += "?" + new URLSearchParams(options.query).toString();
    }
    const headers: Record<string, string> = {};
    if (this.token) {
      headers["Authorization"] = "Bearer " + this.token;
    }
    let body: BodyInit | undefined;
    if (options.form) {
      body = options.form;
    } else if (options.body !== undefined) {
      headers["Content-Type"] = "application/json";
      body = JSON.stringify(options.body);
    }
    const response = await this.fetchImpl(url, { method, headers, body });
    if (response.status === 204) {
      return undefined as T;
    }
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ErrorBody);
    }
    return payload as T;
  }

  async login(username: string, password: string): Promise<LoginResponse> {
    return this.request<LoginResponse>("POST", "/login", {
      body: { username, password },
    });
  }

  listPrograms(): Promise<{ programs: ProgramJson[] }> {
    return this.request("GET", "/programs");
  }

  createProgram(body: { kind: string; fiscal_year: number; name: string }): Promise<ProgramJson> {
    return this.request("POST", "/programs", { body });
  }

  listKecamatan(): Promise<{ kecamatan: KecamatanJson[] }> {
    return this.request("GET", "/kecamatan");
  }

  createKecamatan(body: { name: string }): Promise<KecamatanJson> {
    return this.request("POST", "/kecamatan", { body });
  }

  listDesa(): Promise<{ desa: DesaJson[] }> {
    return this.request("GET", "/desa");
  }

  createDesa(body: { kecamatan_id: string; name: string }): Promise<DesaJson> {
    return this.request("POST", "/desa", { body });
  }

  listKegiatan(): Promise<{ kegiatan: ActivityJson[] }> {
    return this.request("GET", "/kegiatan");
  }

  createKegiatan(body: {
    program_id: string;
    desa_id: string;
    title: string;
    budget: number;
    start_period: number;
    end_period: number;
  }): Promise<ActivityJson> {
    return this.request("POST", "/kegiatan", { body });
  }

  setTargets(
    activityId: string,
    entries: Array<{ period: number; planned_physical: number; planned_financial: number }>,
  ): Promise<{ activity_id: string; entries: TargetEntryJson[] }> {
    return this.request("PUT", `/kegiatan/${activityId}/targets`, { body: { entries } });
  }

  getTargets(activityId: string): Promise<{ activity_id: string; entries: TargetEntryJson[] }> {
    return this.request("GET", `/kegiatan/${activityId}/targets`);
  }

  listReports(activityId: string): Promise<{ reports: ReportJson[] }> {
    return this.request("GET", `/kegiatan/${activityId}/reports`);
  }

  submitReport(activityId: string, body: ReportDraftBody): Promise<ReportJson> {
    return this.request("POST", `/kegiatan/${activityId}/reports`, { body });
  }

  uploadPhoto(
    reportId: string,
    file: File,
    caption: string,
    achievedAtPercent: number,
  ): Promise<PhotoJson> {
    const form = new FormData();
    form.append("file", file);
    form.append("caption", caption);
    form.append("achieved_at_percent", String(achievedAtPercent));
    return this.request("POST", `/reports/${reportId}/photos`, { form });
  }

  listDisbursements(activityId: string): Promise<{ stages: StageJson[] }> {
    return this.request("GET", `/kegiatan/${activityId}/disbursements`);
  }

  recordDisbursement(
    activityId: string,
    body: { stage_number: number; amount: number; date: string },
  ): Promise<StageJson> {
    return this.request("POST", `/kegiatan/${activityId}/disbursements`, { body });
  }

  getSummary(scope: string, id: string, asOfPeriod?: number): Promise<SummaryJson> {
    const query: Record<string, string> = { scope, id };
    if (asOfPeriod !== undefined) {
      query["as_of_period"] = String(asOfPeriod);
    }
    return this.request("GET", "/summary", { query });
  }

  getSCurve(activityId: string, through?: number): Promise<SCurveJson> {
    const query: Record<string, string> = {};
    if (through !== undefined) {
      query["through"] = String(through);
    }
    return this.request("GET", `/kegiatan/${activityId}/s-curve`, { query });
  }

  getStageChart(activityId: string): Promise<StageChartJson> {
    return this.request("GET", `/kegiatan/${activityId}/stage-chart`);
  }

  getLateReports(asOf: string, programId?: string): Promise<LateReportsJson> {
    const query: Record<string, string> = { as_of: asOf };
    if (programId) {
      query["program_id"] = programId;
    }
    return this.request("GET", "/late-reports", { query });
  }
}
