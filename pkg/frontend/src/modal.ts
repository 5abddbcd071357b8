/** Figure detail modal: paper context, siblings, and the verification form.
 *
 * The modal overlays the grid without touching it, so scroll position and
 * tile state survive open/close. Verified figures stay disabled for the
 * session; sibling clicks swap the modal content in place.
 */

import { ApiClient, ApiError, newClientToken } from "./api.js";
import { ALL_LABELS, FigureDetail } from "./types.js";

export class DetailModal {
  private verified = new Set<string>();

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onClose: () => void = () => {},
  ) {}

  async open(figureId: string): Promise<void> {
    this.root.style.display = "block";
    this.root.textContent = "";
    let detail: FigureDetail;
    try {
      detail = await this.api.figureDetail(figureId);
    } catch (err) {
      // stale tile: error inside the modal, grid untouched
      const box = document.createElement("div");
      box.className = "modal-error";
      box.textContent =
        err instanceof ApiError && err.status === 404
          ? `Figure ${figureId} no longer exists.`
          : "Could not load figure details.";
      box.appendChild(this.closeButton());
      this.root.appendChild(box);
      return;
    }
    this.render(detail);
  }

  close(): void {
    this.root.style.display = "none";
    this.root.textContent = "";
    this.onClose();
  }

  private closeButton(): HTMLButtonElement {
    const btn = document.createElement("button");
    btn.className = "modal-close";
    btn.textContent = "Close";
    btn.addEventListener("click", () => this.close());
    return btn;
  }

  private render(detail: FigureDetail): void {
    this.root.textContent = "";
    const box = document.createElement("div");
    box.className = "modal-body";

    const title = document.createElement("h2");
    title.textContent = detail.paper.title;
    box.appendChild(title);

    const meta = document.createElement("p");
    meta.className = "paper-meta";
    const authors = detail.paper.authors ? `${detail.paper.authors}. ` : "";
    meta.textContent = `${authors}${detail.paper.journal}, ${detail.paper.year}`;
    box.appendChild(meta);

    if (detail.paper.abstract) {
      const abs = document.createElement("p");
      abs.className = "abstract";
      abs.textContent = detail.paper.abstract;
      box.appendChild(abs);
    }

    const img = document.createElement("img");
    img.src = this.api.imageUrl(detail.figure.figure_id);
    img.alt = detail.figure.caption;
    img.style.maxWidth = "100%";
    box.appendChild(img);

    const caption = document.createElement("p");
    caption.className = "caption";
    caption.textContent = detail.figure.caption;
    box.appendChild(caption);

    if (detail.paper.source_uri) {
      const link = document.createElement("a");
      link.href = detail.paper.source_uri;
      link.textContent = "source";
      box.appendChild(link);
    }

    if (detail.siblings.length > 0) {
      const sibs = document.createElement("ul");
      sibs.className = "siblings";
      for (const sid of detail.siblings) {
        const li = document.createElement("li");
        const a = document.createElement("a");
        a.href = "#";
        a.dataset.figureId = sid;
        a.textContent = sid;
        a.addEventListener("click", (e) => {
          e.preventDefault();
          void this.open(sid); // swap in place, modal stays open
        });
        li.appendChild(a);
        sibs.appendChild(li);
      }
      box.appendChild(sibs);
    }

    box.appendChild(this.verificationForm(detail.figure.figure_id));
    box.appendChild(this.closeButton());
    this.root.appendChild(box);
  }

  private verificationForm(figureId: string): HTMLFormElement {
    const form = document.createElement("form");
    form.className = "verify-form";
    const select = document.createElement("select");
    select.name = "label";
    for (const label of ALL_LABELS) {
      const opt = document.createElement("option");
      opt.value = label;
      opt.textContent = label;
      select.appendChild(opt);
    }
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "Verify label";
    const status = document.createElement("span");
    status.className = "verify-status";
    form.append(select, submit, status);

    if (this.verified.has(figureId)) {
      select.disabled = true;
      submit.disabled = true;
      status.textContent = "already verified this session";
    }

    form.addEventListener("submit", (e) => {
      e.preventDefault();
      if (this.verified.has(figureId)) return;
      select.disabled = true;
      submit.disabled = true;
      void this.api
        .submitVerification(figureId, select.value, newClientToken())
        .then(() => {
          this.verified.add(figureId);
          status.textContent = "thanks, recorded";
        })
        .catch(() => {
          select.disabled = false;
          submit.disabled = false;
          status.textContent = "submission failed, try again";
        });
    });
    return form;
  }
}
