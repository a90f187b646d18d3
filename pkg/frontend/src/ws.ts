import type { Command, ServerFrame } from "./protocol.js";
import { encodeCommand, getSnapshot, parseServerFrame } from "./protocol.js";

// Thin wrapper around one WebSocket: validates inbound frames, reconnects
// with exponential backoff, and queues outbound commands while disconnected
// (dropped once they sit longer than QUEUE_TTL_MS). The socket constructor,
// clock, and timer are injectable so tests can run without a network.

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
}

export interface SessionSocketOptions {
  makeSocket?: (url: string) => SocketLike;
  now?: () => number;
  schedule?: (fn: () => void, ms: number) => void;
  onFrame?: (frame: ServerFrame) => void;
  onStatus?: (status: "connecting" | "open" | "closed") => void;
}

export const QUEUE_TTL_MS = 5000;
export const BACKOFF_BASE_MS = 500;
export const BACKOFF_MAX_MS = 16000;

export class SessionSocket {
  private readonly url: string;
  private readonly makeSocket: (url: string) => SocketLike;
  private readonly now: () => number;
  private readonly schedule: (fn: () => void, ms: number) => void;
  private readonly onFrame: (frame: ServerFrame) => void;
  private readonly onStatus: (status: "connecting" | "open" | "closed") => void;

  private socket: SocketLike | null = null;
  private open = false;
  private attempts = 0;
  private stopped = false;
  private queue: { at: number; data: string }[] = [];

  constructor(url: string, opts: SessionSocketOptions = {}) {
    this.url = url;
    this.makeSocket = opts.makeSocket
      ?? ((u) => new WebSocket(u) as unknown as SocketLike);
    this.now = opts.now ?? (() => Date.now());
    this.schedule = opts.schedule ?? ((fn, ms) => { setTimeout(fn, ms); });
    this.onFrame = opts.onFrame ?? (() => {});
    this.onStatus = opts.onStatus ?? (() => {});
  }

  connect(): void {
    this.onStatus("connecting");
    const sock = this.makeSocket(this.url);
    this.socket = sock;
    sock.onopen = () => {
      this.open = true;
      this.attempts = 0;
      this.onStatus("open");
      this.flush();
      this.send(getSnapshot());
    };
    sock.onmessage = (ev) => {
      const frame = parseServerFrame(ev.data);
      if (frame !== null) this.onFrame(frame);
      else console.warn("dropping unrecognized frame", ev.data);
    };
    sock.onclose = () => {
      this.open = false;
      this.socket = null;
      this.onStatus("closed");
      this.reconnect();
    };
  }

  stop(): void {
    this.stopped = true;
    this.socket?.close();
  }

  isOpen(): boolean {
    return this.open;
  }

  // Returns true when the command went out immediately.
  send(cmd: Command): boolean {
    const data = encodeCommand(cmd);
    if (this.open && this.socket) {
      this.socket.send(data);
      return true;
    }
    this.prune();
    this.queue.push({ at: this.now(), data });
    return false;
  }

  private prune(): void {
    const cutoff = this.now() - QUEUE_TTL_MS;
    this.queue = this.queue.filter((q) => q.at > cutoff);
  }

  private flush(): void {
    this.prune();
    const pending = this.queue;
    this.queue = [];
    for (const q of pending) this.socket?.send(q.data);
  }

  private reconnect(): void {
    if (this.stopped) return;
    this.attempts += 1;
    const delay = Math.min(BACKOFF_BASE_MS * 2 ** (this.attempts - 1), BACKOFF_MAX_MS);
    this.schedule(() => {
      if (!this.stopped) this.connect();
    }, delay);
  }
}
