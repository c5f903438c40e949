/**
 * Deterministic circular layout: node i of n sits at angle -90° + i·360/n.
 * No forces, no jitter — successive what-if states stay visually comparable.
 */

export interface Point {
  x: number;
  y: number;
}

export function circularLayout(
  nodes: string[],
  width: number,
  height: number,
  padding = 36,
): Map<string, Point> {
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.max(Math.min(width, height) / 2 - padding, 10);
  const positions = new Map<string, Point>();
  const n = nodes.length;
  nodes.forEach((id, i) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / Math.max(n, 1);
    positions.set(id, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return positions;
}
