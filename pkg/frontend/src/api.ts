// Typed client for the fleetintent service HTTP API. The console is a
// pure client: everything it shows comes from these endpoints.

export interface ExpectationDoc {
  description: string;
  objective: string;
  metric: string | null;
}

export interface ConditionDoc {
  subject: string;
  comparator: string;
  threshold: number;
  unit: string;
}

export interface IntentDoc {
  id: string;
  raw_text: string;
  expectations: ExpectationDoc[];
  conditions: ConditionDoc[];
  targets: { kind: string; engine_ids?: number[]; filter?: Record<string, unknown> };
  context: { priority: string; timeframe_days: number | null; scope: string };
  information: { key: string; value: string }[];
}

export interface DecompositionDoc {
  intent: IntentDoc;
  backend_name: string;
  attempts: number;
  repairs: string[][];
}

export interface PlanGroupDoc {
  engine_count: number;
  engine_ids: number[];
  rul_min: number;
  rul_max: number;
  rul_range: string;
  action: string;
  priority: string;
  cost_usd: number;
  labor_hours: number;
  staff: string[];
  scheduled_time: string;
}

export interface PlanDoc {
  tasks: Record<string, unknown>[];
  groups: PlanGroupDoc[];
  totals: { cost_usd: number; labor_hours: number };
  stopped_engine_ids: number[];
}

export interface TraceEventDoc {
  event_id: number;
  parent_id: number | null;
  timestamp: number;
  kind: string;
  agent: string;
  payload: Record<string, unknown>;
}

export interface SnapshotDoc {
  engine_id: number;
  observed_cycle: number;
  last_cycle: number;
  rul: number;
  status: string;
  op_settings: Record<string, number>;
  sensors: Record<string, number>;
}

export interface BandsDoc {
  stop_below: number;
  repair_below: number;
  monitor_soon_below: number;
}

export interface ConfigDoc {
  engine_limit: number;
  backend: string;
  auto_confirm_critical: boolean;
  bands: BandsDoc;
}

export interface MessageReply {
  decomposition: DecompositionDoc;
  response: string;
  plan: PlanDoc | null;
  pending_confirmation: string | null;
  trace_cursor: number;
}

export interface ConfirmReply {
  response: string;
  result: Record<string, unknown>;
  trace_cursor: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly violations: string[] = [],
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  let violations: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
    if (Array.isArray(body.violations)) violations = body.violations;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail, violations);
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        headers: { "Content-Type": "application/json" },
        ...init,
      });
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("/sessions", { method: "POST" });
    return body.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<MessageReply> {
    return this.request(`/sessions/${sessionId}/messages`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  confirm(sessionId: string, token: string): Promise<ConfirmReply> {
    return this.request(`/sessions/${sessionId}/confirm`, {
      method: "POST",
      body: JSON.stringify({ token }),
    });
  }

  async trace(sessionId: string, since: number): Promise<TraceEventDoc[]> {
    const body = await this.request<{ events: TraceEventDoc[] }>(
      `/sessions/${sessionId}/trace?since=${since}`,
    );
    return body.events;
  }

  async fleet(): Promise<SnapshotDoc[]> {
    const body = await this.request<{ snapshots: SnapshotDoc[] }>("/fleet");
    return body.snapshots;
  }

  config(): Promise<ConfigDoc> {
    return this.request("/config");
  }

  async latestPlan(): Promise<PlanDoc | null> {
    try {
      return await this.request<PlanDoc>("/plans/latest");
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }
}
