import { h } from "../dom.js";

/**
 * Full-screen blocking banner for the danger level. Everything underneath is
 * inert until the controller explicitly acknowledges.
 */
export function showDangerBanner(root: HTMLElement, actionText: string, onAcknowledge?: () => void): HTMLElement {
  const existing = root.querySelector('[data-role="danger-banner"]');
  if (existing) existing.remove();

  const button = h("button", { class: "acknowledge" }, "Acknowledge");
  const banner = h(
    "div",
    { class: "danger-banner", "data-role": "danger-banner", "data-blocking": "true", role: "alertdialog" },
    h("div", { class: "danger-box" }, h("h2", {}, "DANGER"), h("p", { "data-role": "danger-action" }, actionText), button),
  );
  button.addEventListener("click", () => {
    banner.remove();
    root.querySelectorAll("fieldset[data-banner-disabled]").forEach((el) => {
      el.removeAttribute("disabled");
      el.removeAttribute("data-banner-disabled");
    });
    onAcknowledge?.();
  });

  // disable every form control region while the banner is up
  root.querySelectorAll("fieldset").forEach((el) => {
    if (!el.hasAttribute("disabled")) {
      el.setAttribute("disabled", "");
      el.setAttribute("data-banner-disabled", "");
    }
  });
  root.append(banner);
  return banner;
}

export function isBlocked(root: HTMLElement): boolean {
  return root.querySelector('[data-role="danger-banner"][data-blocking="true"]') !== null;
}
