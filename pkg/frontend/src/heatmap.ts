import type { MatrixPayload } from './types.js';

export interface HeatmapCell {
	row: number;
	col: number;
	magnitude: number;
	label: string;
}

export interface HeatmapModel {
	size: number;
	dims: number[];
	cells: HeatmapCell[];
	maxMagnitude: number;
}

/** Parse and sanity-check a pasted density-matrix JSON payload. */
export function validateMatrix(input: unknown): MatrixPayload {
	if (typeof input === 'string') {
		try {
			input = JSON.parse(input);
		} catch (err) {
			throw new Error(`not JSON: ${(err as Error).message}`);
		}
	}
	const obj = input as Partial<MatrixPayload>;
	if (!obj || !Array.isArray(obj.dims) || !Array.isArray(obj.re) || !Array.isArray(obj.im)) {
		throw new Error('expected an object with "dims", "re" and "im" fields');
	}
	const size = obj.dims.reduce((a, b) => a * b, 1);
	const shapeOk = (m: number[][]) =>
		m.length === size && m.every((row) => Array.isArray(row) && row.length === size);
	if (!shapeOk(obj.re) || !shapeOk(obj.im)) {
		throw new Error(`"re"/"im" must both be ${size}x${size} for dims [${obj.dims.join(', ')}]`);
	}
	const trace = obj.re.reduce((acc, row, i) => acc + row[i], 0);
	if (Math.abs(trace - 1) > 1e-6) {
		throw new Error(`trace is ${trace.toFixed(6)}, expected 1`);
	}
	return obj as MatrixPayload;
}

function formatEntry(re: number, im: number): string {
	if (Math.abs(im) < 5e-7) return re.toFixed(3);
	return `${re.toFixed(3)}${im >= 0 ? '+' : '-'}${Math.abs(im).toFixed(3)}i`;
}

/** Magnitude grid with per-cell labels, ready to render. */
export function computeCells(matrix: MatrixPayload): HeatmapModel {
	const size = matrix.re.length;
	const cells: HeatmapCell[] = [];
	let maxMagnitude = 0;
	for (let i = 0; i < size; i++) {
		for (let j = 0; j < size; j++) {
			const magnitude = Math.hypot(matrix.re[i][j], matrix.im[i][j]);
			maxMagnitude = Math.max(maxMagnitude, magnitude);
			cells.push({ row: i, col: j, magnitude, label: formatEntry(matrix.re[i][j], matrix.im[i][j]) });
		}
	}
	return { size, dims: matrix.dims, cells, maxMagnitude };
}

export function cellColor(magnitude: number, maxMagnitude: number): string {
	const t = maxMagnitude > 0 ? magnitude / maxMagnitude : 0;
	const light = Math.round(96 - 55 * t);
	return `hsl(214 70% ${light}%)`;
}

/** Render the heatmap into a container element as a labelled grid. */
export function renderHeatmap(container: HTMLElement, matrix: MatrixPayload): HeatmapModel {
	const model = computeCells(matrix);
	container.innerHTML = '';
	container.style.display = 'grid';
	container.style.gridTemplateColumns = `repeat(${model.size}, 1fr)`;
	for (const cell of model.cells) {
		const div = document.createElement('div');
		div.className = 'heatmap-cell';
		div.textContent = cell.label;
		div.style.background = cellColor(cell.magnitude, model.maxMagnitude);
		div.style.color = cell.magnitude > 0.5 * model.maxMagnitude ? '#fff' : '#123';
		div.title = `|entry(${cell.row}, ${cell.col})| = ${cell.magnitude.toFixed(4)}`;
		container.appendChild(div);
	}
	return model;
}
