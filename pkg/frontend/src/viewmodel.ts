// Client-side state: just the latest snapshot plus connection bookkeeping.
// There is deliberately no local game simulation; everything drawn comes
// from the server's last snapshot, so a reconnect resumes cleanly from the
// next message alone.

import { ServerMessage, Snapshot } from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "closed";
export type InputMode = "SENSOR" | "MOUSE" | "KEYS";

export const STALE_AFTER_MS = 500;

export interface ViewModel {
    snapshot: Snapshot | null;
    snapshotAtMs: number | null;
    connection: ConnectionState;
    mode: InputMode;
    serverUrl: string;
    slot: 0 | 1;
    lastError: string | null;
}

export function initialViewModel(serverUrl: string, slot: 0 | 1, mode: InputMode = "MOUSE"): ViewModel {
    return {
        snapshot: null,
        snapshotAtMs: null,
        connection: "connecting",
        mode,
        serverUrl,
        slot,
        lastError: null,
    };
}

export function onConnectionChange(vm: ViewModel, state: ConnectionState): ViewModel {
    return { ...vm, connection: state };
}

export function onServerMessage(vm: ViewModel, msg: ServerMessage, nowMs: number): ViewModel {
    switch (msg.type) {
        case "snapshot":
            return { ...vm, snapshot: msg, snapshotAtMs: nowMs };
        case "error":
            return { ...vm, lastError: msg.message };
        default:
            return vm;
    }
}

export function isStale(vm: ViewModel, nowMs: number): boolean {
    if (vm.snapshotAtMs === null) return true;
    return nowMs - vm.snapshotAtMs > STALE_AFTER_MS;
}

export function statusBanner(vm: ViewModel, nowMs: number): string | null {
    if (vm.connection === "connecting") return "connecting…";
    if (vm.connection === "closed") return "disconnected — retrying";
    if (isStale(vm, nowMs)) return "connection degraded";
    return null;
}

// Everything the renderer needs, derived from the snapshot alone. Keeping
// this a pure projection is what makes the client stateless with respect to
// game rules.
export interface RenderModel {
    phase: Snapshot["phase"] | "waiting";
    snapshot: Snapshot | null;
    banner: string | null;
    mode: InputMode;
}

export function renderModel(vm: ViewModel, nowMs: number): RenderModel {
    return {
        phase: vm.snapshot ? vm.snapshot.phase : "waiting",
        snapshot: vm.snapshot,
        banner: statusBanner(vm, nowMs),
        mode: vm.mode,
    };
}
