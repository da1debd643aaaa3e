// Canvas renderer. Draws only what the latest snapshot says; no game state
// lives here. The unit-square field/screen is letterboxed into the canvas.

import { CursorView, MatchView, Snapshot, TargetRect } from "./protocol.js";
import { RenderModel } from "./viewmodel.js";

export interface Viewport {
    ox: number;
    oy: number;
    scale: number;
}

export function letterbox(width: number, height: number): Viewport {
    const scale = Math.min(width, height);
    return { ox: (width - scale) / 2, oy: (height - scale) / 2, scale };
}

// screen space: u right, v down. field space: x right, y up.
const sx = (vp: Viewport, u: number) => vp.ox + u * vp.scale;
const sy = (vp: Viewport, v: number) => vp.oy + v * vp.scale;
const fy = (vp: Viewport, y: number) => vp.oy + (1 - y) * vp.scale;

export const OPTION_LABELS: Record<string, string> = {
    START: "Start",
    ONE_PLAYER: "One player",
    TWO_PLAYERS: "Two players",
    EASY: "Easy",
    HARD: "Hard",
    HAND: "Hand",
    HEAD: "Head",
    REMATCH: "Rematch",
    QUIT: "Quit",
};

const PHASE_TITLES: Record<string, string> = {
    title: "AVG Pong",
    select_players: "How many players?",
    select_difficulty: "Difficulty",
    select_body_part: "Play with…",
    match_over: "Match over",
};

type Ctx = CanvasRenderingContext2D;

export function render(ctx: Ctx, width: number, height: number, model: RenderModel): void {
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, width, height);
    const vp = letterbox(width, height);

    ctx.strokeStyle = "#2a3442";
    ctx.lineWidth = 2;
    ctx.strokeRect(sx(vp, 0), sy(vp, 0), vp.scale, vp.scale);

    const snap = model.snapshot;
    if (!snap) {
        drawCenteredText(ctx, vp, "waiting for snapshots…", 0.5, 22);
    } else if (snap.phase === "playing" && snap.match) {
        drawMatch(ctx, vp, snap.match);
    } else if (snap.phase === "countdown") {
        const s = snap.countdown_ms !== null ? Math.ceil(snap.countdown_ms / 1000) : 0;
        drawCenteredText(ctx, vp, `get ready… ${s}`, 0.5, 36);
    } else {
        drawMenu(ctx, vp, snap);
    }

    if (model.banner) {
        ctx.fillStyle = "#b33939";
        ctx.fillRect(0, 0, width, 28);
        ctx.fillStyle = "#ffffff";
        ctx.font = "14px system-ui, sans-serif";
        ctx.textAlign = "left";
        ctx.textBaseline = "middle";
        ctx.fillText(model.banner, 8, 14);
    }

    ctx.fillStyle = "#5d6b7d";
    ctx.font = "12px system-ui, sans-serif";
    ctx.textAlign = "right";
    ctx.textBaseline = "bottom";
    ctx.fillText(`input: ${model.mode.toLowerCase()}`, width - 6, height - 6);
}

function drawCenteredText(ctx: Ctx, vp: Viewport, text: string, v: number, px: number): void {
    ctx.fillStyle = "#e8edf4";
    ctx.font = `${px}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(text, sx(vp, 0.5), sy(vp, v));
}

function drawMenu(ctx: Ctx, vp: Viewport, snap: Snapshot): void {
    const title = PHASE_TITLES[snap.phase] ?? "";
    drawCenteredText(ctx, vp, title, 0.18, 30);

    if (snap.phase === "match_over" && snap.winner && snap.final_score) {
        const [l, r] = snap.final_score;
        drawCenteredText(ctx, vp, `${snap.winner} wins ${l} : ${r}`, 0.28, 22);
    }

    for (const t of snap.targets) {
        drawTarget(ctx, vp, t, snap.cursor?.hovered === t.id);
    }
    if (snap.cursor) drawCursor(ctx, vp, snap.cursor);
}

function drawTarget(ctx: Ctx, vp: Viewport, t: TargetRect, hovered: boolean): void {
    const x = sx(vp, t.u_min);
    const y = sy(vp, t.v_min);
    const w = (t.u_max - t.u_min) * vp.scale;
    const h = (t.v_max - t.v_min) * vp.scale;
    ctx.fillStyle = hovered ? "#2f4a6b" : "#1d2733";
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = hovered ? "#7fb2ff" : "#3a4a5e";
    ctx.lineWidth = 2;
    ctx.strokeRect(x, y, w, h);
    ctx.fillStyle = "#e8edf4";
    ctx.font = "20px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(OPTION_LABELS[t.id] ?? t.id, x + w / 2, y + h / 2);
}

function drawCursor(ctx: Ctx, vp: Viewport, cursor: CursorView): void {
    if (!cursor.visible) return;
    const x = sx(vp, cursor.u);
    const y = sy(vp, cursor.v);
    const r = 0.018 * vp.scale;

    ctx.fillStyle = "#f2f6fb";
    ctx.beginPath();
    ctx.arc(x, y, r * 0.45, 0, Math.PI * 2);
    ctx.fill();

    // dwell progress ring
    const progress = Math.min(cursor.dwell_ms / cursor.dwell_threshold_ms, 1);
    if (progress > 0) {
        ctx.strokeStyle = "#7fd17f";
        ctx.lineWidth = 4;
        ctx.beginPath();
        ctx.arc(x, y, r, -Math.PI / 2, -Math.PI / 2 + progress * Math.PI * 2);
        ctx.stroke();
    }
    ctx.strokeStyle = "#8a99ad";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.arc(x, y, r, 0, Math.PI * 2);
    ctx.stroke();
}

function drawMatch(ctx: Ctx, vp: Viewport, m: MatchView): void {
    // center line
    ctx.strokeStyle = "#2a3442";
    ctx.setLineDash([8, 10]);
    ctx.beginPath();
    ctx.moveTo(sx(vp, 0.5), sy(vp, 0));
    ctx.lineTo(sx(vp, 0.5), sy(vp, 1));
    ctx.stroke();
    ctx.setLineDash([]);

    const paddleW = 0.015 * vp.scale;
    for (const side of ["left", "right"] as const) {
        const p = m.paddles[side];
        const x = side === "left" ? sx(vp, 0) : sx(vp, 1) - paddleW;
        const top = fy(vp, p.y + p.half_h);
        ctx.fillStyle = "#e8edf4";
        ctx.fillRect(x, top, paddleW, 2 * p.half_h * vp.scale);
    }

    ctx.fillStyle = "#ffd866";
    ctx.beginPath();
    ctx.arc(sx(vp, m.ball.x), fy(vp, m.ball.y), 0.01 * vp.scale, 0, Math.PI * 2);
    ctx.fill();

    ctx.fillStyle = "#e8edf4";
    ctx.font = `${0.08 * vp.scale}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "top";
    ctx.fillText(String(m.score[0]), sx(vp, 0.35), sy(vp, 0.04));
    ctx.fillText(String(m.score[1]), sx(vp, 0.65), sy(vp, 0.04));

    // remaining lives as pips under the score
    ctx.fillStyle = "#7fd17f";
    for (const [idx, lives] of [m.lives[0], m.lives[1]].entries()) {
        const base = idx === 0 ? 0.35 : 0.65;
        for (let i = 0; i < lives; i++) {
            ctx.beginPath();
            ctx.arc(sx(vp, base - 0.03 + i * 0.03), sy(vp, 0.17), 0.006 * vp.scale, 0, Math.PI * 2);
            ctx.fill();
        }
    }

    if (m.phase === "serving") {
        drawCenteredText(ctx, vp, `${m.serving_side ?? ""} serves`, 0.6, 18);
    }
}
