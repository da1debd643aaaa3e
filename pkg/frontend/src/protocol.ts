// Wire types for the gateway client channel. One JSON text message per
// snapshot or client event; every message carries a "type" field.

export const PROTOCOL_VERSION = 1;

export type Phase =
    | "title"
    | "select_players"
    | "select_difficulty"
    | "select_body_part"
    | "countdown"
    | "playing"
    | "match_over";

export type JointName = "HEAD" | "HAND_LEFT" | "HAND_RIGHT";

export interface TargetRect {
    id: string;
    u_min: number;
    v_min: number;
    u_max: number;
    v_max: number;
}

export interface CursorView {
    u: number;
    v: number;
    visible: boolean;
    hovered: string | null;
    dwell_ms: number;
    dwell_threshold_ms: number;
}

export interface MatchView {
    tick: number;
    seed: number;
    phase: "serving" | "rally" | "over";
    ball: { x: number; y: number; vx: number; vy: number };
    paddles: {
        left: { y: number; half_h: number };
        right: { y: number; half_h: number };
    };
    score: [number, number];
    lives: [number, number];
    rally_speed: number;
    serving_side: "left" | "right" | null;
    serve_delay_ms: number;
    winner: "left" | "right" | null;
}

export interface Snapshot {
    type: "snapshot";
    v: number;
    tick: number;
    phase: Phase;
    config: {
        num_players: number | null;
        difficulty: "easy" | "hard" | null;
        body_part: "hand" | "head" | null;
    };
    cursor: CursorView | null;
    targets: TargetRect[];
    countdown_ms: number | null;
    match: MatchView | null;
    winner: "left" | "right" | null;
    final_score: [number, number] | null;
}

export interface HelloMessage {
    type: "hello";
    v: number;
}

export interface PongMessage {
    type: "pong";
}

export interface ErrorMessage {
    type: "error";
    message: string;
}

export type ServerMessage = Snapshot | HelloMessage | PongMessage | ErrorMessage;

export interface EmulatedJointMessage {
    type: "emulated_joint";
    slot: number;
    joint: JointName;
    x: number;
    y: number;
}

export interface MenuOverrideMessage {
    type: "menu_override";
    option: string;
}

export interface PingMessage {
    type: "ping";
}

export type ClientMessage = EmulatedJointMessage | MenuOverrideMessage | PingMessage;

export const HELLO: HelloMessage = { type: "hello", v: PROTOCOL_VERSION };

export function parseServerMessage(raw: string): ServerMessage | null {
    let obj: unknown;
    try {
        obj = JSON.parse(raw);
    } catch {
        return null;
    }
    if (typeof obj !== "object" || obj === null) return null;
    const t = (obj as { type?: unknown }).type;
    if (t === "snapshot" || t === "hello" || t === "pong" || t === "error") {
        return obj as ServerMessage;
    }
    return null;
}

export function emulatedJoint(
    slot: number,
    joint: JointName,
    x: number,
    y: number,
): EmulatedJointMessage {
    return { type: "emulated_joint", slot, joint, x, y };
}
