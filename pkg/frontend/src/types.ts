/** Wire types mirrored from the server; the client renders these verbatim
 * and never reconstructs hidden information on its own. */

export interface Action {
	type: string;
	basis?: string;
	value?: string;
}

export interface Tally {
	rounds: number;
	caught_rounds: number;
	total: number | '-inf';
	finite_mean: number | null;
}

export interface ViewModel {
	flavor: string;
	phase: 'precheck' | 'examine' | 'joint' | 'done';
	role: string;
	round_index: number;
	legal_actions: Action[];
	observations: Record<string, unknown>;
	tally: Tally;
	reveal: Record<string, unknown> | null;
}

export interface SessionHandle {
	id: string;
	flavor: string;
	seed: number;
	tokens: Record<string, string>;
}

export interface MatrixPayload {
	dims: number[];
	re: number[][];
	im: number[][];
}
