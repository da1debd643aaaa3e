// Gateway connection: hello handshake both ways, auto-reconnect, and a
// structural socket type so tests can drive the client with a scripted fake.

import { ClientMessage, HELLO, ServerMessage, parseServerMessage } from "./protocol.js";

export interface SocketLike {
    send(data: string): void;
    close(): void;
    onopen: ((ev?: unknown) => void) | null;
    onmessage: ((ev: { data: unknown }) => void) | null;
    onclose: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientHandlers {
    onMessage(msg: ServerMessage): void;
    onState(state: "connecting" | "open" | "closed"): void;
}

export class GatewayClient {
    private socket: SocketLike | null = null;
    private closedByUser = false;
    private retryTimer: ReturnType<typeof setTimeout> | null = null;

    constructor(
        private readonly url: string,
        private readonly makeSocket: SocketFactory,
        private readonly handlers: ClientHandlers,
        private readonly retryDelayMs = 500,
    ) {}

    connect(): void {
        this.closedByUser = false;
        this.handlers.onState("connecting");
        const sock = this.makeSocket(this.url);
        this.socket = sock;
        sock.onopen = () => {
            sock.send(JSON.stringify(HELLO));
            this.handlers.onState("open");
        };
        sock.onmessage = (ev) => {
            const msg = parseServerMessage(String(ev.data));
            if (msg && msg.type !== "hello") this.handlers.onMessage(msg);
        };
        sock.onclose = () => {
            this.handlers.onState("closed");
            this.socket = null;
            if (!this.closedByUser) {
                this.retryTimer = setTimeout(() => this.connect(), this.retryDelayMs);
            }
        };
    }

    sendEvent(msg: ClientMessage): void {
        this.socket?.send(JSON.stringify(msg));
    }

    close(): void {
        this.closedByUser = true;
        if (this.retryTimer !== null) clearTimeout(this.retryTimer);
        this.socket?.close();
        this.socket = null;
    }
}
