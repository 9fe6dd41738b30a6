// Input models: turn key/pointer state into per-tick position targets.
//
// Key-dodge maps the task's one-dimensional stay/dodge decision onto a single
// held key: the avatar slides radially outward at a fixed speed tuned so a
// full exit (center to past the hazard ring) takes the human mean exit time,
// and slides back when released.

export const HAZARD_RADIUS = 1.0;
export const EXIT_DURATION = 0.89; // seconds for a full center-to-outside exit
export const HOLD_RADIUS = 1.25;   // where the dodge run stops

export interface KeyState {
  dodge: boolean;
  cache: boolean;
}

export interface InputSample {
  moveTo: [number, number] | null;
  cache: boolean;
}

export class KeyDodgeModel {
  private radius = 0.0;
  private prevCache = false;
  readonly speed: number;

  constructor(exitDuration: number = EXIT_DURATION) {
    this.speed = HAZARD_RADIUS / exitDuration;
  }

  /** Advance one input tick of dt seconds; returns the input to send. */
  tick(dt: number, keys: KeyState): InputSample {
    if (keys.dodge) {
      this.radius = Math.min(HOLD_RADIUS, this.radius + this.speed * dt);
    } else {
      this.radius = Math.max(0.0, this.radius - this.speed * dt);
    }
    const cachePressed = keys.cache && !this.prevCache;
    this.prevCache = keys.cache;
    return { moveTo: [this.radius, 0.0], cache: cachePressed };
  }

  get currentRadius(): number {
    return this.radius;
  }
}

export class PointerFollowModel {
  private target: [number, number] = [0.0, 0.0];
  private prevCache = false;

  /** Pointer position in arena meters (already unprojected by the caller). */
  setPointer(x: number, y: number): void {
    const r = Math.hypot(x, y);
    const clamp = r > HOLD_RADIUS ? HOLD_RADIUS / r : 1.0;
    this.target = [x * clamp, y * clamp];
  }

  tick(_dt: number, keys: KeyState): InputSample {
    const cachePressed = keys.cache && !this.prevCache;
    this.prevCache = keys.cache;
    return { moveTo: [this.target[0], this.target[1]], cache: cachePressed };
  }
}

export type InputModel = KeyDodgeModel | PointerFollowModel;
