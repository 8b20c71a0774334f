import type { Action, MatrixPayload, SessionHandle, ViewModel } from './types.js';

/** The full set of server paths this client is allowed to touch. */
export const DOCUMENTED_ENDPOINTS = [
	'POST /sessions',
	'GET /sessions/{id}/view',
	'POST /sessions/{id}/actions',
	'GET /sessions/{id}/transcripts',
	'GET /states/{id}',
] as const;

export class ApiError extends Error {
	constructor(public status: number, message: string) {
		super(message);
	}
}

async function asJson<T>(response: Response): Promise<T> {
	if (!response.ok) {
		let detail = response.statusText;
		try {
			const body = (await response.json()) as { detail?: string };
			if (body.detail) detail = body.detail;
		} catch {
			/* non-JSON error body */
		}
		throw new ApiError(response.status, detail);
	}
	return (await response.json()) as T;
}

/** Thin fetch wrapper over the documented endpoints; no other paths exist. */
export class ApiClient {
	constructor(public baseUrl: string) {
		this.baseUrl = baseUrl.replace(/\/$/, '');
	}

	async createSession(flavor: string, seed?: number): Promise<SessionHandle> {
		return asJson(
			await fetch(`${this.baseUrl}/sessions`, {
				method: 'POST',
				headers: { 'Content-Type': 'application/json' },
				body: JSON.stringify(seed === undefined ? { flavor } : { flavor, seed }),
			}),
		);
	}

	async getView(id: string, token: string): Promise<ViewModel> {
		return asJson(
			await fetch(`${this.baseUrl}/sessions/${id}/view`, {
				headers: { 'X-Role-Token': token },
			}),
		);
	}

	async postAction(id: string, token: string, action: Action): Promise<ViewModel> {
		return asJson(
			await fetch(`${this.baseUrl}/sessions/${id}/actions`, {
				method: 'POST',
				headers: { 'Content-Type': 'application/json', 'X-Role-Token': token },
				body: JSON.stringify({ action }),
			}),
		);
	}

	async fetchTranscripts(id: string, token: string): Promise<string> {
		const response = await fetch(`${this.baseUrl}/sessions/${id}/transcripts`, {
			headers: { 'X-Role-Token': token },
		});
		if (!response.ok) throw new ApiError(response.status, response.statusText);
		return response.text();
	}

	async fetchNamedState(id: string): Promise<MatrixPayload> {
		return asJson(await fetch(`${this.baseUrl}/states/${id}`));
	}
}
