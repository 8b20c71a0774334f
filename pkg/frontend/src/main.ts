import { ApiClient } from './api.js';
import { GameController } from './game.js';
import { renderHeatmap, validateMatrix } from './heatmap.js';

function el<T extends HTMLElement>(id: string): T {
	const node = document.getElementById(id);
	if (!node) throw new Error(`missing element #${id}`);
	return node as T;
}

const api = new ApiClient(
	(el<HTMLInputElement>('server-url') as HTMLInputElement).value || 'http://127.0.0.1:8000',
);

const controller = new GameController(api, {
	status: el('status'),
	observations: el('observations'),
	actions: el('actions'),
	hint: el('hint'),
	reveal: el('reveal'),
	tallyText: el('tally-text'),
	tallyCanvas: el<HTMLCanvasElement>('tally-canvas'),
	error: el('game-error'),
});

el<HTMLButtonElement>('start').onclick = () => {
	api.baseUrl = el<HTMLInputElement>('server-url').value.replace(/\/$/, '');
	const flavor = el<HTMLSelectElement>('flavor').value;
	void controller.start(flavor).catch((err) => {
		el('game-error').textContent = `could not start: ${(err as Error).message}`;
	});
};

// --- matrix inspector -------------------------------------------------------

const matrixError = el('matrix-error');
const heatmapBox = el('heatmap');

function showMatrix(raw: unknown): void {
	try {
		const matrix = validateMatrix(raw);
		renderHeatmap(heatmapBox, matrix);
		matrixError.textContent = '';
	} catch (err) {
		heatmapBox.innerHTML = '';
		matrixError.textContent = (err as Error).message;
	}
}

el<HTMLButtonElement>('render-matrix').onclick = () => {
	showMatrix(el<HTMLTextAreaElement>('matrix-input').value);
};

el<HTMLButtonElement>('load-state').onclick = () => {
	const id = el<HTMLInputElement>('state-id').value.trim();
	void api
		.fetchNamedState(id)
		.then((m) => {
			el<HTMLTextAreaElement>('matrix-input').value = JSON.stringify(m);
			showMatrix(m);
		})
		.catch((err) => {
			matrixError.textContent = `could not load ${id}: ${(err as Error).message}`;
		});
};
