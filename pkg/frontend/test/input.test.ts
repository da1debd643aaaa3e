import { describe, expect, it } from "vitest";

import {
    BOX,
    KeyJoint,
    Throttle,
    controllingJoint,
    pointerMessage,
    pointerToSensor,
} from "../src/input.js";
import { Snapshot } from "../src/protocol.js";

function snapshotInPhase(phase: Snapshot["phase"], bodyPart: "hand" | "head" | null = "hand"): Snapshot {
    return {
        type: "snapshot",
        v: 1,
        tick: 0,
        phase,
        config: { num_players: 1, difficulty: "easy", body_part: bodyPart },
        cursor: null,
        targets: [],
        countdown_ms: null,
        match: null,
        winner: null,
        final_score: null,
    };
}

describe("pointerToSensor", () => {
    it("canvas center maps to the interaction box midpoint", () => {
        const { x, y } = pointerToSensor(0.5, 0.5);
        expect(x).toBeCloseTo((BOX.xMin + BOX.xMax) / 2, 10);
        expect(y).toBeCloseTo((BOX.yMin + BOX.yMax) / 2, 10);
        expect(x).toBeCloseTo(0.0, 10);
    });

    it("top of canvas maps to top of box (hand up)", () => {
        expect(pointerToSensor(0.5, 0.0).y).toBeCloseTo(BOX.yMax, 10);
        expect(pointerToSensor(0.5, 1.0).y).toBeCloseTo(BOX.yMin, 10);
    });

    it("clamps outside the canvas", () => {
        expect(pointerToSensor(-2, 0.5).x).toBeCloseTo(BOX.xMin, 10);
        expect(pointerToSensor(3, 0.5).x).toBeCloseTo(BOX.xMax, 10);
    });
});

describe("controllingJoint", () => {
    it("menus use the cursor hand", () => {
        expect(controllingJoint(snapshotInPhase("title"), 0)).toBe("HAND_RIGHT");
        expect(controllingJoint(null, 0)).toBe("HAND_RIGHT");
    });

    it("hand play uses the inner hand per side", () => {
        expect(controllingJoint(snapshotInPhase("playing", "hand"), 0)).toBe("HAND_RIGHT");
        expect(controllingJoint(snapshotInPhase("playing", "hand"), 1)).toBe("HAND_LEFT");
    });

    it("head play uses the head", () => {
        expect(controllingJoint(snapshotInPhase("playing", "head"), 0)).toBe("HEAD");
    });
});

describe("Throttle", () => {
    it("limits 300 pointer moves in one second to at most 60 events", () => {
        const throttle = new Throttle(60);
        let sent = 0;
        for (let i = 0; i < 300; i++) {
            const now = (i * 1000) / 300;
            const msg = pointerMessage(null, 0, 0.5, 0.5, now, throttle);
            if (msg) sent++;
        }
        expect(sent).toBeLessThanOrEqual(60);
        // spacing quantization may skip admissions, but not starve them
        expect(sent).toBeGreaterThanOrEqual(45);
    });
});

describe("KeyJoint", () => {
    it("holding arrow-up for half a second raises y by 0.5", () => {
        const kj = new KeyJoint();
        const y0 = kj.y;
        for (let i = 0; i < 30; i++) kj.step(1000 / 60, true, false);
        expect(kj.y - y0).toBeCloseTo(0.5, 5);
    });

    it("clamps to the interaction box", () => {
        const kj = new KeyJoint();
        for (let i = 0; i < 600; i++) kj.step(1000 / 60, true, false);
        expect(kj.y).toBeCloseTo(BOX.yMax, 10);
        for (let i = 0; i < 1200; i++) kj.step(1000 / 60, false, true);
        expect(kj.y).toBeCloseTo(BOX.yMin, 10);
    });

    it("emits the controlling joint for the slot", () => {
        const kj = new KeyJoint();
        const msg = kj.message(snapshotInPhase("playing", "hand"), 1, 1000, new Throttle(60));
        expect(msg).not.toBeNull();
        expect(msg!.type).toBe("emulated_joint");
        if (msg!.type === "emulated_joint") {
            expect(msg!.joint).toBe("HAND_LEFT");
            expect(msg!.slot).toBe(1);
        }
    });
});
