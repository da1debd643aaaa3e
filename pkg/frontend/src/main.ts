// Browser entry point: read settings from query parameters, connect to the
// gateway, pump pointer/key input, draw the latest snapshot every frame.

import { KeyJoint, Throttle, pointerMessage } from "./input.js";
import { GatewayClient, SocketLike } from "./net.js";
import { render } from "./render.js";
import {
    InputMode,
    ViewModel,
    initialViewModel,
    onConnectionChange,
    onServerMessage,
    renderModel,
} from "./viewmodel.js";

const params = new URLSearchParams(location.search);
const serverUrl = params.get("server") ?? "ws://127.0.0.1:8765";
const slot = (params.get("slot") === "1" ? 1 : 0) as 0 | 1;
const startMode = (params.get("mode")?.toUpperCase() as InputMode) || "MOUSE";

const canvas = document.getElementById("game") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

let vm: ViewModel = initialViewModel(serverUrl, slot, startMode);

const client = new GatewayClient(
    serverUrl,
    (url) => new WebSocket(url) as unknown as SocketLike,
    {
        onMessage: (msg) => {
            vm = onServerMessage(vm, msg, performance.now());
        },
        onState: (state) => {
            vm = onConnectionChange(vm, state);
        },
    },
);
client.connect();

const throttle = new Throttle();
const keyJoint = new KeyJoint();
const keysDown = new Set<string>();

canvas.addEventListener("pointermove", (ev) => {
    if (vm.mode !== "MOUSE") return;
    const rect = canvas.getBoundingClientRect();
    const side = Math.min(rect.width, rect.height);
    const ox = (rect.width - side) / 2;
    const oy = (rect.height - side) / 2;
    const u = (ev.clientX - rect.left - ox) / side;
    const v = (ev.clientY - rect.top - oy) / side;
    const msg = pointerMessage(vm.snapshot, vm.slot, u, v, performance.now(), throttle);
    if (msg) client.sendEvent(msg);
});

window.addEventListener("keydown", (ev) => {
    if (ev.key === "m") vm = { ...vm, mode: "MOUSE" };
    if (ev.key === "k") vm = { ...vm, mode: "KEYS" };
    if (ev.key === "s") vm = { ...vm, mode: "SENSOR" };
    keysDown.add(ev.key);
});
window.addEventListener("keyup", (ev) => keysDown.delete(ev.key));

let lastKeyTick = performance.now();
setInterval(() => {
    const now = performance.now();
    const dt = now - lastKeyTick;
    lastKeyTick = now;
    if (vm.mode !== "KEYS") return;
    keyJoint.step(dt, keysDown.has("ArrowUp"), keysDown.has("ArrowDown"));
    const msg = keyJoint.message(vm.snapshot, vm.slot, now, throttle);
    if (msg) client.sendEvent(msg);
}, 1000 / 60);

function resize(): void {
    canvas.width = canvas.clientWidth * devicePixelRatio;
    canvas.height = canvas.clientHeight * devicePixelRatio;
}
window.addEventListener("resize", resize);
resize();

function frame(): void {
    requestAnimationFrame(frame);
    render(ctx, canvas.width, canvas.height, renderModel(vm, performance.now()));
}
requestAnimationFrame(frame);
