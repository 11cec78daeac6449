/**
 * Annotation state: tokens of a recognized document plus cluster
 * assignments. Pure functions only; the DOM layer renders the result.
 *
 * Invariants kept here:
 *  - a token belongs to at most one cluster
 *  - cluster ordinals are dense 1..k in creation order (badge = position + 1)
 */

export interface TokenView {
  sentenceId: string
  index: number
  form: string
}

export interface SentenceView {
  sentenceId: string
  tokens: TokenView[]
}

export interface ClusterSpan {
  sentence_id: string
  start: number
  end: number
}

/** `${sentenceId}:${index}` */
export type TokenKey = string

export interface UiDocument {
  docId: string
  sentences: SentenceView[]
  /** ordinal = array position + 1 */
  clusters: TokenKey[][]
}

export interface ToggleResult {
  doc: UiDocument
  /** set when the token was moved out of another cluster or a cluster vanished */
  warning?: string
}

export interface RecognizeResponse {
  doc_id: string
  sentences: {
    sentence_id: string
    tokens: { index: number; form: string }[]
  }[]
}

export function tokenKey(sentenceId: string, index: number): TokenKey {
  return `${sentenceId}:${index}`
}

export function splitKey(key: TokenKey): { sentenceId: string; index: number } {
  const at = key.lastIndexOf(':')
  return { sentenceId: key.slice(0, at), index: Number(key.slice(at + 1)) }
}

export function documentFromRecognize(resp: RecognizeResponse): UiDocument {
  return {
    docId: resp.doc_id,
    sentences: resp.sentences.map(s => ({
      sentenceId: s.sentence_id,
      tokens: s.tokens.map(t => ({
        sentenceId: s.sentence_id,
        index: t.index,
        form: t.form,
      })),
    })),
    clusters: [],
  }
}

/** 1-based ordinal of the cluster holding the token, or undefined. */
export function clusterOf(doc: UiDocument, key: TokenKey): number | undefined {
  for (let i = 0; i < doc.clusters.length; i++) {
    if (doc.clusters[i].includes(key)) {
      return i + 1
    }
  }
  return undefined
}

function withoutEmptyClusters(clusters: TokenKey[][]): TokenKey[][] {
  return clusters.filter(c => c.length > 0)
}

/**
 * Add the token to the target cluster (ordinal, or clusters.length + 1 for
 * a new one), remove it when already there, move it when it sits in a
 * different cluster. Empty clusters disappear and ordinals recompact.
 */
export function toggleToken(
  doc: UiDocument,
  key: TokenKey,
  targetOrdinal: number,
): ToggleResult {
  if (targetOrdinal < 1 || targetOrdinal > doc.clusters.length + 1) {
    throw new Error(`cluster ordinal ${targetOrdinal} out of range`)
  }
  const current = clusterOf(doc, key)
  let clusters = doc.clusters.map(c => [...c])
  let warning: string | undefined

  if (current === targetOrdinal) {
    clusters[current - 1] = clusters[current - 1].filter(k => k !== key)
    const removed = clusters[current - 1].length === 0
    clusters = withoutEmptyClusters(clusters)
    if (removed) {
      warning = `cluster ${current} became empty and was removed`
    }
  } else {
    if (current !== undefined) {
      clusters[current - 1] = clusters[current - 1].filter(k => k !== key)
      warning = `token moved from cluster ${current} to cluster ${targetOrdinal}`
    }
    if (targetOrdinal > clusters.length) {
      clusters.push([key])
    } else {
      clusters[targetOrdinal - 1].push(key)
    }
    const hadEmpty = clusters.some(c => c.length === 0)
    clusters = withoutEmptyClusters(clusters)
    if (hadEmpty && warning === undefined) {
      warning = 'an emptied cluster was removed; ordinals recompacted'
    }
  }
  return { doc: { ...doc, clusters }, warning }
}

function sentenceLookup(doc: UiDocument): Map<string, number> {
  const order = new Map<string, number>()
  doc.sentences.forEach((s, i) => order.set(s.sentenceId, i))
  return order
}

export interface SpanExport {
  spans: ClusterSpan[]
  /** one notice per cluster that had to be split into several spans */
  notices: string[]
}

/**
 * Clusters as contiguous per-sentence spans for saving. A discontiguous or
 * multi-sentence cluster is split into runs, with a notice (the gold
 * format stores spans, so annotator slips become visible, not fatal).
 */
export function clusterSpans(doc: UiDocument): SpanExport {
  const order = sentenceLookup(doc)
  const spans: ClusterSpan[] = []
  const notices: string[] = []
  doc.clusters.forEach((cluster, i) => {
    const bySentence = new Map<string, number[]>()
    for (const key of cluster) {
      const { sentenceId, index } = splitKey(key)
      const got = bySentence.get(sentenceId)
      if (got) {
        got.push(index)
      } else {
        bySentence.set(sentenceId, [index])
      }
    }
    let runs = 0
    const sentenceIds = [...bySentence.keys()].sort(
      (a, b) => (order.get(a) ?? 0) - (order.get(b) ?? 0),
    )
    for (const sentenceId of sentenceIds) {
      const indices = bySentence.get(sentenceId)!.sort((a, b) => a - b)
      let start = indices[0]
      let prev = indices[0]
      for (const index of indices.slice(1)) {
        if (index === prev + 1) {
          prev = index
          continue
        }
        spans.push({ sentence_id: sentenceId, start, end: prev })
        runs++
        start = prev = index
      }
      spans.push({ sentence_id: sentenceId, start, end: prev })
      runs++
    }
    if (runs > 1) {
      notices.push(`cluster ${i + 1} is discontiguous and was saved as ${runs} spans`)
    }
  })
  return { spans, notices }
}

/** Rebuild cluster assignments from saved spans (the reload path). */
export function applySavedSpans(doc: UiDocument, spans: ClusterSpan[]): UiDocument {
  const clusters: TokenKey[][] = spans.map(span => {
    const keys: TokenKey[] = []
    for (let i = span.start; i <= span.end; i++) {
      keys.push(tokenKey(span.sentence_id, i))
    }
    return keys
  })
  return { ...doc, clusters }
}

/** Contiguous runs of one sentence for rendering framed groups. */
export interface RenderRun {
  tokens: TokenView[]
  /** cluster ordinal when the run is part of a cluster */
  ordinal?: number
}

export function sentenceRuns(doc: UiDocument, sentence: SentenceView): RenderRun[] {
  const runs: RenderRun[] = []
  let current: RenderRun | null = null
  for (const token of sentence.tokens) {
    const ordinal = clusterOf(doc, tokenKey(token.sentenceId, token.index))
    if (current && current.ordinal === ordinal && ordinal !== undefined) {
      current.tokens.push(token)
      continue
    }
    current = { tokens: [token], ordinal }
    runs.push(current)
  }
  return runs
}
