/** Small DOM helpers shared by the views; no framework, just elements. */

import type { FieldProblem } from "../api.js";

export function h<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

/**
 * A labeled input with an error slot addressed by the wire field name.
 * Server 422 details land in these slots via showFieldProblems.
 */
export function labeledInput(
  doc: Document,
  field: string,
  label: string,
  type = "text",
): { wrapper: HTMLElement; input: HTMLInputElement } {
  const wrapper = h(doc, "div", "field");
  wrapper.dataset["field"] = field;
  const labelNode = h(doc, "label", undefined, label);
  const input = doc.createElement("input");
  input.type = type;
  input.name = field;
  labelNode.append(input);
  const slot = h(doc, "p", "field-error");
  slot.dataset["errorFor"] = field;
  wrapper.append(labelNode, slot);
  return { wrapper, input };
}

export function clearFieldProblems(form: HTMLElement): void {
  for (const slot of Array.from(form.querySelectorAll<HTMLElement>("[data-error-for]"))) {
    slot.textContent = "";
  }
  const general = form.querySelector<HTMLElement>(".form-error");
  if (general) {
    general.textContent = "";
  }
}

/**
 * Put each problem next to its field; anything without a matching slot goes
 * to the form-wide error box so no message is ever dropped.
 */
export function showFieldProblems(form: HTMLElement, problems: FieldProblem[]): void {
  clearFieldProblems(form);
  const general: string[] = [];
  for (const problem of problems) {
    const slot = form.querySelector<HTMLElement>(`[data-error-for="${problem.field}"]`);
    if (slot) {
      slot.textContent = slot.textContent
        ? `${slot.textContent}; ${problem.message}`
        : problem.message;
    } else {
      general.push(`${problem.field}: ${problem.message}`);
    }
  }
  if (general.length > 0) {
    showFormError(form, general.join("; "));
  }
}

export function showFormError(form: HTMLElement, message: string): void {
  let box = form.querySelector<HTMLElement>(".form-error");
  if (!box) {
    box = form.ownerDocument.createElement("p");
    box.className = "form-error";
    form.append(box);
  }
  box.textContent = message;
}
