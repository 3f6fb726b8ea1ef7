/* Wire types of the topoproj service, transcribed field for field.
   The client renders these; it never computes geometry or topology. */

export interface UploadResponse {
  dataset_id: string;
  n: number;
  d: number;
  checksum: string;
}

export interface MstResponse {
  total_weight: number;
  l_max: number;
  seconds: number;
}

export interface MstRequest {
  method: "exact" | "approx";
  params?: { alpha?: number; L?: number; R?: number; passes?: number };
  seed?: number;
}

export interface HierarchyNode {
  id: number;
  size: number;
  birth: number;
  death: number | null; // null = the root, never dies
  children: number[];
  retained: boolean;
  component_of_interest: boolean;
}

export interface TreemapRect {
  node: number;
  x: number;
  y: number;
  w: number;
  h: number;
  depth: number;
  persistence: number | null;
  size: number;
  component_of_interest: boolean;
  outlier?: boolean;
}

export interface HierarchyResponse {
  eta: number;
  hierarchy: {
    n: number;
    root: number;
    eta: number;
    components_of_interest: number[];
    nodes: HierarchyNode[];
  };
  treemap: TreemapRect[];
}

export interface LayoutComponent {
  id: number;
  alpha: number;
  hull: [number, number][];
  size: number;
}

export interface LayoutResponse {
  n: number;
  coords: [number, number][];
  component_of: (number | null)[];
  components: LayoutComponent[];
  l_max: number;
}

export interface LayoutRequest {
  selected: number[];
  c?: number;
  alpha_max?: number | null;
}

export interface ErrorBody {
  error: string;
  message: string;
  invalid?: number[];
}

export type ColorMode = "persistence" | "label" | "component";
