import type { ViewModel } from './types.js';

/** Advisory strategy text; the player always makes the actual choice. */
export function hintFor(view: ViewModel): string {
	const joint = view.observations['joint_outcome'] as string | undefined;
	if (view.phase === 'joint' && joint) {
		return joint === '01' || joint === '10'
			? `Joint readout ${joint}: on this preparation that pattern means the flip was probably performed.`
			: `Joint readout ${joint}: matching bits suggest nothing was done.`;
	}
	if (view.phase === 'precheck') {
		return (
			'Measuring now risks the check: the possible preparations are not all ' +
			'in one basis, so a probe can be detected. Passing is always safe.'
		);
	}
	if (view.phase === 'examine') {
		return (
			'Your qubit alone carries no trace of the flip; guessing from here is ' +
			'a coin toss (expected 50). A joint readout with Bob decides correctly ' +
			'two thirds of the time (expected 60).'
		);
	}
	return '';
}
