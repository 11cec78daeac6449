/** Client for the annotation backend; talks JSON over fetch. */

import { ClusterSpan, RecognizeResponse } from './model.js'

export interface DocumentPayload extends RecognizeResponse {
  clusters?: ClusterSpan[]
}

export interface DocumentListing {
  documents: { doc_id: string; n_sentences: number; n_clusters: number }[]
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message)
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init)
  let body: unknown
  try {
    body = await resp.json()
  } catch {
    body = {}
  }
  if (!resp.ok) {
    const message =
      typeof body === 'object' && body !== null && 'error' in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${resp.status}`
    throw new ApiError(resp.status, message)
  }
  return body as T
}

export function recognize(base: string, text: string): Promise<RecognizeResponse> {
  return request(`${base}/api/documents`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ text }),
  })
}

export function fetchDocument(base: string, docId: string): Promise<DocumentPayload> {
  return request(`${base}/api/documents/${docId}`)
}

export function listDocuments(base: string): Promise<DocumentListing> {
  return request(`${base}/api/documents`)
}

export function saveClusters(
  base: string,
  docId: string,
  spans: ClusterSpan[],
): Promise<{ doc_id: string; saved: number }> {
  return request(`${base}/api/documents/${docId}/clusters`, {
    method: 'PUT',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ clusters: spans }),
  })
}
