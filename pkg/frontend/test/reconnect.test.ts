// Scripted-socket statelessness check: kill the connection mid-match,
// reconnect, and verify rendering resumes from the next snapshot alone.

import { describe, expect, it } from "vitest";

import { GatewayClient, SocketLike } from "../src/net.js";
import { ServerMessage, Snapshot } from "../src/protocol.js";
import {
    ViewModel,
    initialViewModel,
    onConnectionChange,
    onServerMessage,
    renderModel,
} from "../src/viewmodel.js";

class FakeSocket implements SocketLike {
    sent: string[] = [];
    onopen: ((ev?: unknown) => void) | null = null;
    onmessage: ((ev: { data: unknown }) => void) | null = null;
    onclose: ((ev?: unknown) => void) | null = null;

    send(data: string): void {
        this.sent.push(data);
    }

    close(): void {
        this.onclose?.();
    }

    // test controls
    open(): void {
        this.onopen?.();
    }

    push(msg: object): void {
        this.onmessage?.({ data: JSON.stringify(msg) });
    }
}

function matchSnap(tick: number, score: [number, number]): Snapshot {
    return {
        type: "snapshot",
        v: 1,
        tick,
        phase: "playing",
        config: { num_players: 1, difficulty: "easy", body_part: "hand" },
        cursor: null,
        targets: [],
        countdown_ms: null,
        match: {
            tick,
            seed: 7,
            phase: "rally",
            ball: { x: 0.3, y: 0.6, vx: -0.5, vy: 0.1 },
            paddles: { left: { y: 0.4, half_h: 0.1 }, right: { y: 0.7, half_h: 0.1 } },
            score,
            lives: [3 - score[1], 3 - score[0]],
            rally_speed: 0.55,
            serving_side: null,
            serve_delay_ms: 0,
            winner: null,
        },
        winner: null,
        final_score: null,
    };
}

describe("reconnect mid-match", () => {
    it("resumes rendering from the next snapshot with no residue", () => {
        const sockets: FakeSocket[] = [];
        let vm: ViewModel = initialViewModel("ws://fake", 0);
        const client = new GatewayClient(
            "ws://fake",
            () => {
                const s = new FakeSocket();
                sockets.push(s);
                return s;
            },
            {
                onMessage: (msg: ServerMessage) => {
                    vm = onServerMessage(vm, msg, 1000 + sockets.length);
                },
                onState: (state) => {
                    vm = onConnectionChange(vm, state);
                },
            },
            1, // fast retry for the test
        );

        client.connect();
        const first = sockets[0];
        first.open();
        expect(first.sent[0]).toBe('{"type":"hello","v":1}');
        first.push({ type: "hello", v: 1 });
        first.push(matchSnap(100, [0, 1]));
        expect(vm.snapshot!.tick).toBe(100);

        // connection dies mid-match
        first.close();
        expect(vm.connection).toBe("closed");

        return new Promise<void>((resolve) => {
            setTimeout(() => {
                // auto-reconnect created a second socket; hello again
                expect(sockets.length).toBe(2);
                const second = sockets[1];
                second.open();
                expect(second.sent[0]).toBe('{"type":"hello","v":1}');

                // the very next snapshot fully determines the render
                const resumed = matchSnap(250, [1, 2]);
                second.push(resumed);
                const rendered = renderModel(vm, 2000);

                let fresh = initialViewModel("ws://fake", 0);
                fresh = onConnectionChange(fresh, "open");
                fresh = onServerMessage(fresh, resumed, vm.snapshotAtMs!);
                expect(rendered).toEqual(renderModel(fresh, 2000));
                expect(rendered.snapshot!.match!.score).toEqual([1, 2]);

                client.close();
                resolve();
            }, 10);
        });
    });
});
