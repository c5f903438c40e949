/**
 * Stable color assignment for alternatives: each id gets a palette slot the
 * first time it is seen and keeps it for the whole session, so the bipartite
 * view, class chips, and line graph stay consistent across edits.
 */

const PALETTE = [
  "#e6a100", "#d62d20", "#2e9940", "#7b4fd1",
  "#0a7fa8", "#c4527e", "#6b7f2a", "#8a5a36",
  "#3553c4", "#3aa18f", "#a93ab5", "#946e00",
];

export class ColorAssigner {
  private assigned = new Map<string, string>();

  colorOf(id: string): string {
    let color = this.assigned.get(id);
    if (color === undefined) {
      color = PALETTE[this.assigned.size % PALETTE.length] as string;
      this.assigned.set(id, color);
    }
    return color;
  }

  seed(ids: string[]): void {
    for (const id of ids) this.colorOf(id);
  }
}
