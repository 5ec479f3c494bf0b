/** Wire types of the configuration service. */

export type FeatureState = "selected" | "deselected" | "undecided";
export type Origin = "user" | "propagated" | "initial" | null;

export interface StateEntry {
  state: FeatureState;
  origin: Origin;
}

export type StatesMap = Record<string, StateEntry>;

export interface Status {
  valid: boolean;
  complete: boolean;
  undecided: string[];
}

export interface SessionDoc {
  session: string;
  model: string;
  states: StatesMap;
  status: Status;
}

export interface DecideDoc {
  accepted: boolean;
  newly_decided: { feature: string; value: FeatureState; origin: string }[];
  conflict: string | null;
  states: StatesMap;
  status: Status;
}

export interface ModelNode {
  name: string;
  link: "root" | "mandatory" | "optional" | "member";
  abstract: boolean;
  group: "or" | "xor" | null;
  children: ModelNode[];
}

export interface ConstraintDoc {
  lhs: string;
  op: "=>" | "<=>";
  rhs: string;
}

export interface ModelDoc {
  name: string;
  root: ModelNode;
  constraints: ConstraintDoc[];
}
