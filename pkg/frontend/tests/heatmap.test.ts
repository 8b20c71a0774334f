import { describe, expect, it } from 'vitest';

import { cellColor, computeCells, validateMatrix } from '../src/heatmap.js';
import type { MatrixPayload } from '../src/types.js';

function bellPair(): MatrixPayload {
	const re = Array.from({ length: 4 }, () => [0, 0, 0, 0]);
	for (const [i, j] of [[0, 0], [0, 3], [3, 0], [3, 3]] as const) re[i][j] = 0.5;
	return { dims: [2, 2], re, im: re.map((row) => row.map(() => 0)) };
}

function flippedBell(): MatrixPayload {
	const re = Array.from({ length: 4 }, () => [0, 0, 0, 0]);
	for (const [i, j] of [[1, 1], [1, 2], [2, 1], [2, 2]] as const) re[i][j] = 0.5;
	return { dims: [2, 2], re, im: re.map((row) => row.map(() => 0)) };
}

const cellAt = (model: ReturnType<typeof computeCells>, i: number, j: number) =>
	model.cells.find((c) => c.row === i && c.col === j)!;

describe('heatmap model', () => {
	it('bell pair has 0.5 magnitude in all four corners', () => {
		const model = computeCells(bellPair());
		for (const [i, j] of [[0, 0], [0, 3], [3, 0], [3, 3]] as const) {
			expect(cellAt(model, i, j).magnitude).toBeCloseTo(0.5, 12);
		}
		expect(cellAt(model, 1, 1).magnitude).toBe(0);
		expect(model.maxMagnitude).toBeCloseTo(0.5, 12);
	});

	it('after the flip the 0.5 values sit in the middle', () => {
		const model = computeCells(flippedBell());
		expect(cellAt(model, 1, 1).magnitude).toBeCloseTo(0.5, 12);
		expect(cellAt(model, 1, 2).magnitude).toBeCloseTo(0.5, 12);
		expect(cellAt(model, 0, 0).magnitude).toBe(0);
		expect(cellAt(model, 0, 3).magnitude).toBe(0);
	});

	it('uncorrelated product is a uniform 0.25 diagonal', () => {
		const re = Array.from({ length: 4 }, (_, i) =>
			Array.from({ length: 4 }, (_, j) => (i === j ? 0.25 : 0)),
		);
		const model = computeCells({ dims: [2, 2], re, im: re.map((r) => r.map(() => 0)) });
		for (let i = 0; i < 4; i++) expect(cellAt(model, i, i).magnitude).toBeCloseTo(0.25, 12);
		expect(model.maxMagnitude).toBeCloseTo(0.25, 12);
	});

	it('labels carry imaginary parts', () => {
		const m: MatrixPayload = {
			dims: [2],
			re: [[0.5, 0], [0, 0.5]],
			im: [[0, -0.5], [0.5, 0]],
		};
		const model = computeCells(m);
		expect(cellAt(model, 0, 1).label).toBe('0.000-0.500i');
	});

	it('colors scale with magnitude', () => {
		expect(cellColor(0, 1)).not.toBe(cellColor(1, 1));
	});
});

describe('matrix validation', () => {
	it('accepts a valid pasted string', () => {
		const parsed = validateMatrix(JSON.stringify(bellPair()));
		expect(parsed.dims).toEqual([2, 2]);
	});

	it('rejects non-JSON', () => {
		expect(() => validateMatrix('{oops')).toThrow(/not JSON/);
	});

	it('rejects missing fields', () => {
		expect(() => validateMatrix({ dims: [2, 2], re: [[1]] })).toThrow(/"dims", "re" and "im"/);
	});

	it('rejects shape mismatches', () => {
		const bad = { dims: [2, 2], re: [[1, 0], [0, 0]], im: [[0, 0], [0, 0]] };
		expect(() => validateMatrix(bad)).toThrow(/4x4/);
	});

	it('rejects wrong trace', () => {
		const m = bellPair();
		m.re[0][0] = 0.9;
		expect(() => validateMatrix(m)).toThrow(/trace/);
	});
});
