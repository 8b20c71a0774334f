/** Round-score bookkeeping for the tally chart. */

export type RoundScore = number | '-inf';

export function cumulativeMeans(scores: RoundScore[]): number[] {
	const means: number[] = [];
	let sum = 0;
	let finite = 0;
	for (const s of scores) {
		if (s !== '-inf') {
			sum += s;
			finite += 1;
		}
		means.push(finite > 0 ? sum / finite : 0);
	}
	return means;
}

export function drawTally(canvas: HTMLCanvasElement, scores: RoundScore[]): void {
	const ctx = canvas.getContext('2d');
	if (!ctx) return;
	const { width, height } = canvas;
	ctx.clearRect(0, 0, width, height);
	ctx.strokeStyle = '#ccc';
	for (const level of [0, 50, 100]) {
		const y = height - (level / 100) * (height - 10) - 5;
		ctx.beginPath();
		ctx.moveTo(0, y);
		ctx.lineTo(width, y);
		ctx.stroke();
	}
	const means = cumulativeMeans(scores);
	if (!means.length) return;
	ctx.strokeStyle = '#1d62b4';
	ctx.lineWidth = 2;
	ctx.beginPath();
	means.forEach((m, i) => {
		const x = means.length === 1 ? width / 2 : (i / (means.length - 1)) * width;
		const y = height - (Math.min(Math.max(m, 0), 100) / 100) * (height - 10) - 5;
		if (i === 0) ctx.moveTo(x, y);
		else ctx.lineTo(x, y);
	});
	ctx.stroke();
	ctx.fillStyle = '#d33';
	scores.forEach((s, i) => {
		if (s !== '-inf') return;
		const x = scores.length === 1 ? width / 2 : (i / (scores.length - 1)) * width;
		ctx.fillRect(x - 2, 0, 4, 8);
	});
}
