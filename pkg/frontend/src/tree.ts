/**
 * Feature tree rendering. Pure DOM construction from a model snapshot
 * and a display-state lookup; all interaction goes back through the
 * supplied toggle callback.
 */

import { FeatureView, GroupView, ModelView } from './api.js';
import { DisplayState } from './store.js';

export interface TreeOptions {
  state(name: string): DisplayState;
  onToggle(name: string, wanted: boolean): void;
  /** Feature to mark as the source of a conflict, if any. */
  highlight?: string | null;
}

/** Features grouped by parent name, in the order the service sent them. */
export function childrenOf(model: ModelView): Map<string | null, FeatureView[]> {
  const byParent = new Map<string | null, FeatureView[]>();
  for (const feature of model.features) {
    const siblings = byParent.get(feature.parent);
    if (siblings) siblings.push(feature);
    else byParent.set(feature.parent, [feature]);
  }
  return byParent;
}

const STATE_CLASS: Record<DisplayState, string> = {
  UserSelected: 'state-user-selected',
  UserDeselected: 'state-user-deselected',
  ForcedSelected: 'state-forced-selected',
  ForcedDeselected: 'state-forced-deselected',
  Open: 'state-open',
};

const STATE_GLYPH: Record<DisplayState, string> = {
  UserSelected: '✓',
  UserDeselected: '✗',
  ForcedSelected: '✓',
  ForcedDeselected: '✗',
  Open: '·',
};

const VARIABILITY_MARK: Record<FeatureView['variability'], string> = {
  mandatory: '●',
  optional: '○',
  'group-member': '',
};

export function renderTree(container: HTMLElement, model: ModelView, options: TreeOptions): void {
  const byParent = childrenOf(model);
  const groupsByParent = new Map<string, GroupView[]>();
  for (const group of model.groups) {
    const list = groupsByParent.get(group.parent);
    if (list) list.push(group);
    else groupsByParent.set(group.parent, [group]);
  }
  const root = model.features.find(f => f.name === model.root);
  container.textContent = '';
  if (!root) return;
  const list = document.createElement('ul');
  list.className = 'feature-tree';
  list.append(renderFeature(root, byParent, groupsByParent, options));
  container.append(list);
}

function renderFeature(
  feature: FeatureView,
  byParent: Map<string | null, FeatureView[]>,
  groupsByParent: Map<string, GroupView[]>,
  options: TreeOptions,
): HTMLLIElement {
  const item = document.createElement('li');
  const state = options.state(feature.name);
  item.className = `feature ${STATE_CLASS[state]}`;
  item.dataset.feature = feature.name;
  if (options.highlight === feature.name) item.classList.add('conflict-source');

  const row = renderRow(feature, state, options);
  const grouped = new Set(
    (groupsByParent.get(feature.name) ?? []).flatMap(g => g.members));
  const plainChildren = (byParent.get(feature.name) ?? []).filter(
    child => !grouped.has(child.name));
  const groups = groupsByParent.get(feature.name) ?? [];

  if (!plainChildren.length && !groups.length) {
    item.append(row);
    return item;
  }

  const details = document.createElement('details');
  details.open = true;
  const summary = document.createElement('summary');
  summary.append(row);
  details.append(summary);
  const children = document.createElement('ul');
  children.className = 'children';
  for (const child of plainChildren) {
    children.append(renderFeature(child, byParent, groupsByParent, options));
  }
  for (const group of [...groups].sort((a, b) => a.name.localeCompare(b.name))) {
    children.append(renderGroup(group, byParent, groupsByParent, options));
  }
  details.append(children);
  item.append(details);
  return item;
}

function renderGroup(
  group: GroupView,
  byParent: Map<string | null, FeatureView[]>,
  groupsByParent: Map<string, GroupView[]>,
  options: TreeOptions,
): HTMLLIElement {
  const item = document.createElement('li');
  item.className = `group group-${group.kind}`;
  item.dataset.group = group.name;

  const header = document.createElement('span');
  header.className = 'group-header';
  const badge = document.createElement('span');
  badge.className = 'badge group-badge';
  badge.textContent = group.kind;
  header.append(badge, ` ${group.name}`);
  item.append(header);

  const members = document.createElement('ul');
  members.className = 'children';
  const siblings = byParent.get(group.parent) ?? [];
  const wanted = new Set(group.members);
  for (const member of siblings.filter(f => wanted.has(f.name))) {
    members.append(renderFeature(member, byParent, groupsByParent, options));
  }
  item.append(members);
  return item;
}

function renderRow(feature: FeatureView, state: DisplayState, options: TreeOptions): HTMLSpanElement {
  const row = document.createElement('span');
  row.className = 'row';

  const glyph = document.createElement('span');
  glyph.className = 'state-glyph';
  glyph.textContent = STATE_GLYPH[state];
  row.append(glyph);

  const mark = VARIABILITY_MARK[feature.variability];
  if (mark) {
    const marker = document.createElement('span');
    marker.className = `marker marker-${feature.variability}`;
    marker.textContent = mark;
    row.append(marker);
  }

  const name = document.createElement('span');
  name.className = 'name';
  name.textContent = feature.name;
  row.append(name);

  if (feature.version > 1) {
    const badge = document.createElement('span');
    badge.className = 'badge version-badge';
    badge.textContent = `@v${feature.version}`;
    row.append(badge);
  }
  if (feature.module) {
    const badge = document.createElement('span');
    badge.className = 'badge module-badge';
    badge.textContent = feature.module;
    row.append(badge);
  }

  row.append(
    renderButton('✓', 'pick', `select ${feature.name}`, feature.name, true, options),
    renderButton('✗', 'drop', `exclude ${feature.name}`, feature.name, false, options),
  );
  return row;
}

function renderButton(
  label: string,
  kind: string,
  title: string,
  name: string,
  wanted: boolean,
  options: TreeOptions,
): HTMLButtonElement {
  const button = document.createElement('button');
  button.type = 'button';
  button.className = `toggle ${kind}`;
  button.textContent = label;
  button.title = title;
  button.addEventListener('click', event => {
    // inside a <summary>: don't let the click fold the subtree
    event.preventDefault();
    event.stopPropagation();
    options.onToggle(name, wanted);
  });
  return button;
}
