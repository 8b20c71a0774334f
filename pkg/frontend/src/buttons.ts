import type { Action, ViewModel } from './types.js';

export interface ButtonSpec {
	label: string;
	action: Action;
}

const TYPE_LABELS: Record<string, string> = {
	pass: 'Leave the qubit alone',
	tamper: 'Measure before the check',
	measure: 'Examine your qubit',
	ask_bob: 'Ask Bob for a joint readout',
	guess: 'Guess',
	new_round: 'Next round',
};

function labelFor(action: Action): string {
	const base = TYPE_LABELS[action.type] ?? action.type;
	if (action.basis) return `${base} (${action.basis})`;
	if (action.value === 'op') return `${base}: the flip happened`;
	if (action.value === 'noop') return `${base}: nothing happened`;
	return base;
}

/** One button per server-listed legal action, in server order - no more,
 * no fewer. The heart of the UI contract. */
export function buttonsForView(view: ViewModel): ButtonSpec[] {
	return view.legal_actions.map((action) => ({ label: labelFor(action), action }));
}
