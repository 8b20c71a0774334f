import { ApiClient, ApiError } from './api.js';
import { buttonsForView } from './buttons.js';
import { hintFor } from './hint.js';
import { drawTally, type RoundScore } from './tally.js';
import type { SessionHandle, ViewModel } from './types.js';

const POLL_MS = 500;

export interface GameElements {
	status: HTMLElement;
	observations: HTMLElement;
	actions: HTMLElement;
	hint: HTMLElement;
	reveal: HTMLElement;
	tallyText: HTMLElement;
	tallyCanvas: HTMLCanvasElement;
	error: HTMLElement;
}

/** Owns one session as Alice: renders views, posts actions, polls. */
export class GameController {
	private session: SessionHandle | null = null;
	private scores: RoundScore[] = [];
	private seenRounds = new Set<number>();
	private timer: ReturnType<typeof setInterval> | null = null;
	private inFlight = false;

	constructor(private api: ApiClient, private el: GameElements) {}

	async start(flavor: string): Promise<void> {
		this.stopPolling();
		this.scores = [];
		this.seenRounds = new Set();
		this.session = await this.api.createSession(flavor);
		await this.refresh();
		this.timer = setInterval(() => void this.refresh(), POLL_MS);
	}

	stopPolling(): void {
		if (this.timer !== null) clearInterval(this.timer);
		this.timer = null;
	}

	private get token(): string {
		if (!this.session) throw new Error('no active session');
		return this.session.tokens['alice'];
	}

	async refresh(): Promise<void> {
		if (!this.session || this.inFlight) return;
		this.inFlight = true;
		try {
			this.render(await this.api.getView(this.session.id, this.token));
			this.el.error.textContent = '';
		} catch (err) {
			this.el.error.textContent = `${(err as Error).message} - retrying`;
		} finally {
			this.inFlight = false;
		}
	}

	private async act(action: ViewModel['legal_actions'][number]): Promise<void> {
		if (!this.session || this.inFlight) return;
		this.inFlight = true;
		try {
			this.render(await this.api.postAction(this.session.id, this.token, action));
			this.el.error.textContent = '';
		} catch (err) {
			if (err instanceof ApiError && err.status === 409) {
				// Raced our own poll; just re-render the authoritative view.
				this.inFlight = false;
				return this.refresh();
			}
			this.el.error.textContent = (err as Error).message;
		} finally {
			this.inFlight = false;
		}
	}

	/** Pure render from the server payload - nothing is reconstructed. */
	render(view: ViewModel): void {
		this.el.status.textContent =
			`${view.flavor} - round ${view.round_index + 1} - phase: ${view.phase}`;

		const facts: string[] = [];
		for (const [key, value] of Object.entries(view.observations)) {
			facts.push(`${key}: ${JSON.stringify(value)}`);
		}
		this.el.observations.textContent = facts.length ? facts.join('\n') : '(nothing observed yet)';

		this.el.actions.innerHTML = '';
		for (const spec of buttonsForView(view)) {
			const button = document.createElement('button');
			button.textContent = spec.label;
			button.onclick = () => void this.act(spec.action);
			this.el.actions.appendChild(button);
		}

		this.el.hint.textContent = hintFor(view);

		if (view.phase === 'done' && view.reveal) {
			if (!this.seenRounds.has(view.round_index)) {
				this.seenRounds.add(view.round_index);
				this.scores.push(view.reveal['score'] as RoundScore);
			}
			const caught = view.reveal['caught'] ? ' - you were caught, the round is locked' : '';
			this.el.reveal.textContent =
				`score: ${view.reveal['score']}${caught}\n` +
				`the flip was ${view.reveal['op_applied'] ? 'performed' : 'not performed'}\n` +
				`full transcript: ${JSON.stringify(view.reveal)}`;
		} else {
			this.el.reveal.textContent = '';
		}

		const t = view.tally;
		this.el.tallyText.textContent =
			`rounds: ${t.rounds}, caught: ${t.caught_rounds}, total: ${t.total}` +
			(t.finite_mean !== null ? `, mean: ${t.finite_mean.toFixed(1)}` : '');
		drawTally(this.el.tallyCanvas, this.scores);
	}
}
