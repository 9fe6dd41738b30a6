// Websocket session client.  Uses the standard browser WebSocket shape; tests
// inject the "ws" package's compatible implementation.

import {
  HelloOptions,
  ServerMessage,
  byeMessage,
  helloMessage,
  inputMessage,
  parseServerMessage,
} from "./protocol.js";

// Structural subset shared by the browser WebSocket and the "ws" package.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientHandlers {
  onMessage: (msg: ServerMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
  onMalformed?: (raw: string) => void;
}

export class SessionClient {
  private socket: SocketLike | null = null;
  private seq = 0;
  readonly url: string;

  constructor(url: string, private factory: SocketFactory,
              private handlers: ClientHandlers) {
    this.url = url;
  }

  connect(hello: HelloOptions): void {
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      socket.send(helloMessage(hello));
      this.handlers.onOpen?.();
    };
    socket.onmessage = (ev) => {
      const raw = typeof ev.data === "string" ? ev.data : String(ev.data);
      const msg = parseServerMessage(raw);
      if (msg === null) {
        this.handlers.onMalformed?.(raw);
        return;
      }
      this.handlers.onMessage(msg);
    };
    socket.onclose = () => this.handlers.onClose?.();
    socket.onerror = () => { /* onclose follows; the app shows the banner */ };
  }

  sendInput(moveTo: [number, number] | null, cache: boolean): void {
    this.seq += 1;
    this.socket?.send(inputMessage(this.seq, moveTo, cache));
  }

  sendBye(): void {
    this.socket?.send(byeMessage());
  }

  close(): void {
    this.socket?.close();
  }
}
