/** DOM layer: token chips, cluster frames with ordinal badges, banners. */

import { SentenceView, UiDocument, sentenceRuns, tokenKey } from './model.js'

export interface RenderHandlers {
  onToggle: (key: string) => void
}

export function renderDocument(
  container: HTMLElement,
  doc: UiDocument | null,
  handlers: RenderHandlers,
): void {
  container.textContent = ''
  if (!doc) {
    return
  }
  for (const sentence of doc.sentences) {
    container.appendChild(renderSentence(doc, sentence, handlers))
  }
}

function renderSentence(
  doc: UiDocument,
  sentence: SentenceView,
  handlers: RenderHandlers,
): HTMLElement {
  const line = document.createElement('div')
  line.className = 'sentence'
  for (const run of sentenceRuns(doc, sentence)) {
    const holder = document.createElement('span')
    if (run.ordinal !== undefined) {
      holder.className = 'cluster-frame'
      holder.dataset.ordinal = String(run.ordinal)
    } else {
      holder.className = 'free-run'
    }
    for (const token of run.tokens) {
      const chip = document.createElement('span')
      chip.className = 'token'
      chip.textContent = token.form
      chip.dataset.key = tokenKey(token.sentenceId, token.index)
      chip.addEventListener('click', () => handlers.onToggle(chip.dataset.key!))
      holder.appendChild(chip)
    }
    line.appendChild(holder)
  }
  return line
}

export function renderClusterButtons(
  container: HTMLElement,
  doc: UiDocument | null,
  active: number,
  onSelect: (ordinal: number) => void,
): void {
  container.textContent = ''
  const count = doc ? doc.clusters.length : 0
  for (let ordinal = 1; ordinal <= count + 1; ordinal++) {
    const button = document.createElement('button')
    button.type = 'button'
    button.className = 'cluster-select' + (ordinal === active ? ' active' : '')
    button.textContent = ordinal <= count ? `cluster ${ordinal}` : '+ new cluster'
    button.addEventListener('click', () => onSelect(ordinal))
    container.appendChild(button)
  }
}

export type BannerKind = 'info' | 'warning' | 'error'

export function showBanner(element: HTMLElement, kind: BannerKind | null, text = ''): void {
  element.className = kind ? `banner ${kind}` : 'banner hidden'
  element.textContent = text
}
