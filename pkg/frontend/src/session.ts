/**
 * Session state for the prediction view's mean-degree exploration.
 *
 * Every degree the user tries is kept as a candidate; the newest one is
 * "active" and earlier ones render as faded curves. State round-trips
 * through the server's history endpoint, so reloading a session id must
 * rebuild exactly the same candidate list in the same order.
 */

import { HistoryEntry, HistoryResponse } from "./schemas.js";
import { ApiClient } from "./client.js";

export interface Candidate {
  nInit: number;
  apeSeries: number[];
  timestamp: number;
  /** false only for the most recently added candidate. */
  faded: boolean;
}

export class SessionState {
  private candidates: Candidate[] = [];

  constructor(readonly sessionId: string) {}

  /** Candidates in insertion order; the last one is the active curve. */
  list(): readonly Candidate[] {
    return this.candidates;
  }

  active(): Candidate | undefined {
    return this.candidates[this.candidates.length - 1];
  }

  addCandidate(nInit: number, apeSeries: number[], timestamp: number): Candidate {
    for (const c of this.candidates) c.faded = true;
    const candidate: Candidate = { nInit, apeSeries: [...apeSeries], timestamp, faded: false };
    this.candidates.push(candidate);
    return candidate;
  }

  /** Rebuild from a server history payload. Deterministic: same payload,
   * same state, regardless of how the entries were accumulated. */
  static fromHistory(payload: HistoryResponse): SessionState {
    const state = new SessionState(payload.session_id);
    for (const entry of payload.entries) {
      state.addCandidate(entry.n_init, entry.ape_series, entry.timestamp);
    }
    return state;
  }

  /** The exact wire form of this state, for equality checks and resync. */
  toHistory(): HistoryResponse {
    return {
      session_id: this.sessionId,
      entries: this.candidates.map((c) => ({
        n_init: c.nInit,
        timestamp: c.timestamp,
        ape_series: [...c.apeSeries],
      })),
    };
  }
}

/** Try a new mean degree: persist it server-side, then update local state.
 * The server entry is the source of truth for the stored timestamp. */
export async function tryMeanDegree(
  client: ApiClient,
  state: SessionState,
  nInit: number,
  apeSeries: number[],
  timestamp?: number,
): Promise<HistoryEntry> {
  const entry = await client.appendHistory(state.sessionId, {
    n_init: nInit,
    ape_series: apeSeries,
    timestamp,
  });
  state.addCandidate(entry.n_init, entry.ape_series, entry.timestamp);
  return entry;
}

/** Reload a session from the server. */
export async function reloadSession(client: ApiClient, sessionId: string): Promise<SessionState> {
  return SessionState.fromHistory(await client.history(sessionId));
}
