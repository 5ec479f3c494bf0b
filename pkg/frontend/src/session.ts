/**
 * Client-side session state. Mutations are serialized (one in-flight request
 * per session) and every applied update carries a sequence number, so a
 * response that lost the race is discarded instead of clobbering newer state.
 * The stored states/status are always verbatim service responses.
 */

import { ApiClient, ApiError } from "./api.js";
import type { FeatureState, StatesMap, Status } from "./types.js";

export type Listener = (states: StatesMap, status: Status) => void;

export interface DecideOutcome {
  ok: boolean;
  conflict?: string;
}

export class SessionController {
  private sessionId: string | null = null;
  private states: StatesMap = {};
  private status: Status = { valid: true, complete: false, undecided: [] };
  private listeners: Listener[] = [];
  private chain: Promise<unknown> = Promise.resolve();
  private sequence = 0;
  private applied = 0;

  constructor(
    readonly api: ApiClient,
    readonly model: string,
  ) {}

  get id(): string {
    if (this.sessionId === null) throw new Error("session not started");
    return this.sessionId;
  }

  get currentStates(): StatesMap {
    return this.states;
  }

  get currentStatus(): Status {
    return this.status;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  /** Resolves once every queued mutation has settled. */
  idle(): Promise<unknown> {
    return this.chain;
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.states, this.status);
  }

  /** Apply a server response unless a newer one has been applied already. */
  apply(seq: number, states: StatesMap, status: Status): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    this.states = states;
    this.status = status;
    this.notify();
    return true;
  }

  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.chain.then(op, op);
    this.chain = next.catch(() => undefined);
    return next;
  }

  async start(): Promise<void> {
    const doc = await this.api.createSession(this.model);
    this.sessionId = doc.session;
    this.apply(++this.sequence, doc.states, doc.status);
  }

  decide(feature: string, value: FeatureState): Promise<DecideOutcome> {
    return this.enqueue(async () => {
      const seq = ++this.sequence;
      try {
        const doc = await this.api.decide(this.id, feature, value);
        this.apply(seq, doc.states, doc.status);
        return { ok: true };
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          // rejected: server state unchanged, surface the explanation
          return { ok: false, conflict: String(error.detail) };
        }
        throw error;
      }
    });
  }

  undo(): Promise<void> {
    return this.enqueue(async () => {
      const seq = ++this.sequence;
      const doc = await this.api.undo(this.id);
      this.apply(seq, doc.states, doc.status);
    });
  }

  finalize(): Promise<void> {
    return this.enqueue(async () => {
      const seq = ++this.sequence;
      const doc = await this.api.finalize(this.id);
      this.apply(seq, doc.states, doc.status);
    });
  }

  /** Re-fetch the authoritative state, e.g. after a network failure. */
  refresh(): Promise<void> {
    return this.enqueue(async () => {
      const seq = ++this.sequence;
      const doc = await this.api.getSession(this.id);
      this.apply(seq, doc.states, doc.status);
    });
  }

  generate(): Promise<Blob> {
    return this.enqueue(() => this.api.generate(this.id));
  }
}
