/**
 * Barycentric layout of three-mode occupation vectors.
 *
 * Convention: the (N,0,0) vertex sits bottom-left, (0,N,0) bottom-right,
 * (0,0,N) at the top, matching the orientation used throughout the data
 * set's domain diagrams.
 */

export interface TernaryFrame {
  N: number;
  originX: number;
  originY: number;
  side: number;
}

export function ternaryPoint(
  frame: TernaryFrame,
  n: [number, number, number],
): [number, number] {
  const [a, b, c] = [n[0] / frame.N, n[1] / frame.N, n[2] / frame.N];
  const h = (Math.sqrt(3) / 2) * frame.side;
  const x = frame.originX + frame.side * (b + c / 2);
  const y = frame.originY + h * (1 - c);
  void a;
  return [x, y];
}

export function ternaryCorners(
  frame: TernaryFrame,
): [[number, number], [number, number], [number, number]] {
  return [
    ternaryPoint(frame, [frame.N, 0, 0]),
    ternaryPoint(frame, [0, frame.N, 0]),
    ternaryPoint(frame, [0, 0, frame.N]),
  ];
}
