// Bridge client: WebSocket connection with auto-reconnect. On every (re)open
// it re-advertises its publications and re-subscribes its topics, then
// resumes publishing.

import {
  Envelope,
  TOPIC_TYPES,
  decodeEnvelope,
  encodeEnvelope,
  errorFrameMessage,
  makePublish,
} from "./protocol.js";

export interface BridgeClientOptions {
  advertise: string[]; // topics this client publishes
  subscribe: string[]; // topics this client wants delivered
  onMessage?: (env: Envelope) => void;
  onStatus?: (connected: boolean) => void;
  onProtocolError?: (message: string) => void;
  webSocketImpl?: typeof WebSocket;
  reconnectMinMs?: number;
  reconnectMaxMs?: number;
}

export class BridgeClient {
  readonly url: string;
  private readonly opts: BridgeClientOptions;
  private readonly WS: typeof WebSocket;
  private ws: WebSocket | null = null;
  private closed = false;
  private backoffMs: number;
  private readonly epoch: number;
  connected = false;

  constructor(url: string, opts: BridgeClientOptions) {
    this.url = url;
    this.opts = opts;
    this.WS = opts.webSocketImpl ?? WebSocket;
    this.backoffMs = opts.reconnectMinMs ?? 500;
    this.epoch = Date.now();
  }

  stampNow(): number {
    return (Date.now() - this.epoch) / 1000;
  }

  connect(): void {
    if (this.closed) return;
    const ws = new this.WS(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.connected = true;
      this.backoffMs = this.opts.reconnectMinMs ?? 500;
      for (const topic of this.opts.advertise) {
        this.sendRaw({ op: "advertise", topic, type: TOPIC_TYPES[topic], stamp: this.stampNow() });
      }
      for (const topic of this.opts.subscribe) {
        this.sendRaw({ op: "subscribe", topic, stamp: this.stampNow() });
      }
      this.opts.onStatus?.(true);
    };
    ws.onmessage = (event: MessageEvent) => {
      const text = String(event.data);
      const errText = errorFrameMessage(text);
      if (errText !== null) {
        this.opts.onProtocolError?.(errText);
        return;
      }
      try {
        this.opts.onMessage?.(decodeEnvelope(text));
      } catch (err) {
        this.opts.onProtocolError?.(String(err));
      }
    };
    ws.onclose = () => {
      this.connected = false;
      this.opts.onStatus?.(false);
      this.scheduleReconnect();
    };
    ws.onerror = () => {
      // onclose follows; nothing to do here
    };
  }

  private scheduleReconnect(): void {
    if (this.closed) return;
    const delay = this.backoffMs;
    this.backoffMs = Math.min(this.backoffMs * 2, this.opts.reconnectMaxMs ?? 5000);
    setTimeout(() => this.connect(), delay);
  }

  private sendRaw(env: Envelope): boolean {
    if (this.ws !== null && this.ws.readyState === this.WS.OPEN) {
      this.ws.send(encodeEnvelope(env));
      return true;
    }
    return false;
  }

  publish(topic: string, msg: Record<string, unknown>): boolean {
    return this.sendRaw(makePublish(topic, msg, this.stampNow()));
  }

  // Exactly one /control/params message per selector change.
  sendDamping(dampingNsPerM: number): boolean {
    return this.publish("/control/params", { damping_ns_per_m: dampingNsPerM });
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
