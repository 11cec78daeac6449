/**
 * Wiring for the annotation page: paste text, Recognize, click tokens into
 * the active cluster, Save clusters. State lives in model.ts; this file
 * only routes events.
 */

import { fetchDocument, recognize, saveClusters } from './api.js'
import {
  UiDocument,
  applySavedSpans,
  clusterSpans,
  documentFromRecognize,
  toggleToken,
} from './model.js'
import { renderClusterButtons, renderDocument, showBanner } from './render.js'

const BASE = ''

let doc: UiDocument | null = null
let activeCluster = 1

const textInput = document.getElementById('text-input') as HTMLTextAreaElement
const recognizeButton = document.getElementById('recognize') as HTMLButtonElement
const saveButton = document.getElementById('save') as HTMLButtonElement
const reloadButton = document.getElementById('reload') as HTMLButtonElement
const tokensBox = document.getElementById('tokens') as HTMLElement
const clustersBox = document.getElementById('clusters') as HTMLElement
const banner = document.getElementById('banner') as HTMLElement

function repaint(): void {
  renderDocument(tokensBox, doc, { onToggle: handleToggle })
  renderClusterButtons(clustersBox, doc, activeCluster, ordinal => {
    activeCluster = ordinal
    repaint()
  })
  saveButton.disabled = doc === null
  reloadButton.disabled = doc === null
}

function handleToggle(key: string): void {
  if (!doc) {
    return
  }
  const target = Math.min(activeCluster, doc.clusters.length + 1)
  const result = toggleToken(doc, key, target)
  doc = result.doc
  activeCluster = Math.min(target, doc.clusters.length + 1)
  showBanner(banner, result.warning ? 'warning' : null, result.warning ?? '')
  repaint()
}

async function handleRecognize(): Promise<void> {
  const text = textInput.value.trim()
  if (!text) {
    showBanner(banner, 'warning', 'paste some text first')
    return
  }
  if (doc && doc.clusters.length > 0) {
    const sure = window.confirm('Recognizing again clears the current clusters. Continue?')
    if (!sure) {
      return
    }
  }
  try {
    doc = documentFromRecognize(await recognize(BASE, text))
    activeCluster = 1
    showBanner(banner, 'info', `document ${doc.docId}: ${doc.sentences.length} sentences`)
  } catch (err) {
    showBanner(banner, 'error', `recognize failed: ${(err as Error).message}`)
  }
  repaint()
}

async function handleSave(): Promise<void> {
  if (!doc) {
    return
  }
  const { spans, notices } = clusterSpans(doc)
  try {
    const saved = await saveClusters(BASE, doc.docId, spans)
    const notice = notices.length ? ` (${notices.join('; ')})` : ''
    showBanner(banner, 'info', `saved ${saved.saved} spans${notice}`)
  } catch (err) {
    // keep local state untouched so nothing is lost on a backend error
    showBanner(banner, 'error', `save failed: ${(err as Error).message}`)
  }
}

async function handleReload(): Promise<void> {
  if (!doc) {
    return
  }
  try {
    const payload = await fetchDocument(BASE, doc.docId)
    doc = applySavedSpans(documentFromRecognize(payload), payload.clusters ?? [])
    activeCluster = doc.clusters.length + 1
    showBanner(banner, 'info', `reloaded ${doc.clusters.length} saved clusters`)
  } catch (err) {
    showBanner(banner, 'error', `reload failed: ${(err as Error).message}`)
  }
  repaint()
}

recognizeButton.addEventListener('click', () => void handleRecognize())
saveButton.addEventListener('click', () => void handleSave())
reloadButton.addEventListener('click', () => void handleReload())
repaint()
