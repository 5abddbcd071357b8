/** Brick-wall packing: fixed-height rows, variable widths preserving aspect.
 *
 * The row height equals the brick size exactly, for every tile, at every
 * slider value; packing never reorders items.
 */

export interface Brick {
  id: string;
  /** natural image dimensions */
  width: number;
  height: number;
}

export interface PlacedBrick {
  id: string;
  w: number;
  h: number;
}

export type Row = PlacedBrick[];

export function brickWallLayout(
  items: readonly Brick[],
  rowHeight: number,
  containerWidth: number,
  gap = 8,
): Row[] {
  if (rowHeight <= 0 || containerWidth <= 0) {
    throw new RangeError("rowHeight and containerWidth must be positive");
  }
  const rows: Row[] = [];
  let row: Row = [];
  let used = 0;
  for (const item of items) {
    const aspect =
      item.width > 0 && item.height > 0 ? item.width / item.height : 1;
    // height is law; width follows aspect but never exceeds the container
    const w = Math.min(
      Math.max(1, Math.round(aspect * rowHeight)),
      containerWidth,
    );
    const needed = row.length === 0 ? w : used + gap + w;
    if (row.length > 0 && needed > containerWidth) {
      rows.push(row);
      row = [];
      used = 0;
    }
    row.push({ id: item.id, w, h: rowHeight });
    used = row.length === 1 ? w : used + gap + w;
  }
  if (row.length > 0) rows.push(row);
  return rows;
}

/** Conventional layout: uniform square cells, still order-preserving. */
export function conventionalLayout(
  items: readonly Brick[],
  cell: number,
): PlacedBrick[] {
  return items.map((item) => ({ id: item.id, w: cell, h: cell }));
}
