// Mouse/keyboard joint emulation: the desk-scale substitute for the sensor.
// Pointer positions invert the gateway's interaction-box mapping exactly, so
// the on-screen cursor lands under the pointer; arrow keys integrate a
// virtual joint at a fixed vertical speed.

import { ClientMessage, JointName, Snapshot, emulatedJoint } from "./protocol.js";

// Must mirror the gateway's interaction box defaults.
export const BOX = { xMin: -0.6, xMax: 0.6, yMin: -0.4, yMax: 0.6 };

export const KEY_SPEED_UNITS_PER_S = 1.0;
export const MAX_EVENTS_PER_S = 60;

const clamp = (v: number, lo: number, hi: number) => Math.min(Math.max(v, lo), hi);

/** Screen-normalized (u,v) with v=0 at the top -> sensor coordinates. */
export function pointerToSensor(u: number, v: number): { x: number; y: number } {
    const x = BOX.xMin + clamp(u, 0, 1) * (BOX.xMax - BOX.xMin);
    const y = BOX.yMin + (1 - clamp(v, 0, 1)) * (BOX.yMax - BOX.yMin);
    return { x, y };
}

/** Which joint this client's pointer drives, given the current phase. */
export function controllingJoint(snapshot: Snapshot | null, slot: 0 | 1): JointName {
    if (snapshot && snapshot.phase === "playing" && snapshot.config.body_part === "head") {
        return "HEAD";
    }
    if (snapshot && snapshot.phase === "playing" && snapshot.config.body_part === "hand") {
        // inner hands face the screen center: left player right hand, right player left hand
        return slot === 0 ? "HAND_RIGHT" : "HAND_LEFT";
    }
    // menus use the dwell cursor hand
    return slot === 0 ? "HAND_RIGHT" : "HAND_LEFT";
}

/** Rate limiter: at most MAX_EVENTS_PER_S messages pass through. */
export class Throttle {
    private lastSentMs = -Infinity;
    private readonly minIntervalMs: number;

    constructor(maxPerSecond: number = MAX_EVENTS_PER_S) {
        this.minIntervalMs = 1000 / maxPerSecond;
    }

    offer(nowMs: number): boolean {
        if (nowMs - this.lastSentMs < this.minIntervalMs) return false;
        this.lastSentMs = nowMs;
        return true;
    }
}

export function pointerMessage(
    snapshot: Snapshot | null,
    slot: 0 | 1,
    u: number,
    v: number,
    nowMs: number,
    throttle: Throttle,
): ClientMessage | null {
    if (!throttle.offer(nowMs)) return null;
    const { x, y } = pointerToSensor(u, v);
    return emulatedJoint(slot, controllingJoint(snapshot, slot), x, y);
}

/** Arrow-key joint: y moves at KEY_SPEED_UNITS_PER_S while a key is held. */
export class KeyJoint {
    x = 0;
    y = (BOX.yMin + BOX.yMax) / 2;

    step(dtMs: number, up: boolean, down: boolean): void {
        const dir = (up ? 1 : 0) - (down ? 1 : 0);
        this.y = clamp(this.y + dir * KEY_SPEED_UNITS_PER_S * (dtMs / 1000), BOX.yMin, BOX.yMax);
    }

    message(
        snapshot: Snapshot | null,
        slot: 0 | 1,
        nowMs: number,
        throttle: Throttle,
    ): ClientMessage | null {
        if (!throttle.offer(nowMs)) return null;
        return emulatedJoint(slot, controllingJoint(snapshot, slot), this.x, this.y);
    }
}
