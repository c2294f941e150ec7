// Arrow-key command history with an editable draft line.

const LIMIT = 200;

export class CommandHistory {
  private entries: string[] = [];
  private cursor = -1; // -1 means "not navigating"
  private draft = "";

  push(line: string): void {
    const trimmed = line.trim();
    if (!trimmed) return;
    if (this.entries[this.entries.length - 1] !== trimmed) {
      this.entries.push(trimmed);
      if (this.entries.length > LIMIT) this.entries.shift();
    }
    this.cursor = -1;
    this.draft = "";
  }

  /** Up arrow: older entry, remembering the in-progress line. */
  up(current: string): string | null {
    if (this.entries.length === 0) return null;
    if (this.cursor === -1) {
      this.draft = current;
      this.cursor = this.entries.length;
    }
    if (this.cursor === 0) return null;
    this.cursor -= 1;
    return this.entries[this.cursor];
  }

  /** Down arrow: newer entry, or back to the saved draft. */
  down(): string | null {
    if (this.cursor === -1) return null;
    this.cursor += 1;
    if (this.cursor >= this.entries.length) {
      this.cursor = -1;
      return this.draft;
    }
    return this.entries[this.cursor];
  }

  all(): readonly string[] {
    return this.entries;
  }
}
