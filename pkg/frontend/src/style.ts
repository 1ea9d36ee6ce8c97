/**
 * Fixed figure styling so rendered images are reproducible byte for byte.
 */

export const WIDTH = 860;
export const HEIGHT = 520;

export const MARGIN = { top: 40, right: 30, bottom: 48, left: 64 };

export const FONT_FAMILY = "Helvetica, Arial, sans-serif";
export const FONT_SIZE = 12;
export const TITLE_SIZE = 15;

/** One color per series, cycled in first-appearance order. */
export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export const BAND_OPACITY = 0.18;
export const LINE_WIDTH = 1.8;
export const THICK_LINE_WIDTH = 3.0;
export const THIN_LINE_WIDTH = 1.2;
export const MARKER_COLOR = "#222222";
