//! XOR oracles and the oracle constructions built on top of them.

use super::{Layout, QuantumError, Register, StateVector};
use crate::oracles::{ceil_log2, encode_value, Codomain, FunctionTable, InstanceClass, Permutation};

/// Where an oracle call reads its input, writes its answer, and keeps any
/// scratch qubits (which it must return to `|0⟩`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleWires {
    pub input: Register,
    pub output: Register,
    pub workspace: Register,
}

/// Anything that acts as the XOR oracle `|i⟩|b⟩ ↦ |i⟩|b ⊕ g(i)⟩` of a
/// function `g`, possibly simulated through other oracles.
pub trait QuantumOracle {
    fn domain_size(&self) -> usize;

    fn codomain(&self) -> Codomain;

    /// Scratch qubits needed per call.
    fn workspace_width(&self) -> usize;

    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError>;

    /// Calls made so far to the underlying input oracle.
    fn queries(&self) -> usize;

    fn answer_width(&self) -> usize {
        match self.codomain() {
            Codomain::Bits => 1,
            Codomain::Range(m) => ceil_log2(m),
        }
    }
}

impl<T: QuantumOracle + ?Sized> QuantumOracle for &mut T {
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }
    fn codomain(&self) -> Codomain {
        (**self).codomain()
    }
    fn workspace_width(&self) -> usize {
        (**self).workspace_width()
    }
    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError> {
        (**self).apply(state, wires)
    }
    fn queries(&self) -> usize {
        (**self).queries()
    }
}

fn check_wires(
    state: &StateVector,
    wires: &OracleWires,
    domain: usize,
    answer_width: usize,
    workspace_width: usize,
) -> Result<(), QuantumError> {
    for reg in [wires.input, wires.output, wires.workspace] {
        state.check_register(reg)?;
    }
    if wires.input.width != ceil_log2(domain) {
        return Err(QuantumError::Layout(format!(
            "input register has {} qubits, domain {domain} needs {}",
            wires.input.width,
            ceil_log2(domain)
        )));
    }
    if wires.output.width < answer_width {
        return Err(QuantumError::Layout(format!(
            "answer register has {} qubits, needs {answer_width}",
            wires.output.width
        )));
    }
    if wires.workspace.width < workspace_width {
        return Err(QuantumError::Layout(format!(
            "workspace has {} qubits, needs {workspace_width}",
            wires.workspace.width
        )));
    }
    let regs = [wires.input, wires.output, wires.workspace];
    for (i, a) in regs.iter().enumerate() {
        for b in &regs[i + 1..] {
            if a.overlaps(b) {
                return Err(QuantumError::Layout("oracle registers overlap".into()));
            }
        }
    }
    Ok(())
}

/// The standard XOR oracle of an explicit table, with a query tally.
#[derive(Debug, Clone)]
pub struct OracleUnitary {
    table: FunctionTable,
    tally: usize,
}

impl OracleUnitary {
    pub fn new(table: impl Into<FunctionTable>) -> Self {
        Self { table: table.into(), tally: 0 }
    }

    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn tally(&self) -> usize {
        self.tally
    }
}

impl<T> From<&T> for OracleUnitary
where
    for<'a> &'a T: Into<FunctionTable>,
{
    fn from(x: &T) -> Self {
        OracleUnitary::new(x)
    }
}

impl QuantumOracle for OracleUnitary {
    fn domain_size(&self) -> usize {
        self.table.domain_size()
    }

    fn codomain(&self) -> Codomain {
        self.table.codomain()
    }

    fn workspace_width(&self) -> usize {
        0
    }

    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError> {
        check_wires(state, &wires, self.domain_size(), self.table.value_bits(), 0)?;
        let table = &self.table;
        let input = wires.input;
        state.xor_into(wires.output, |b| match table.eval(input.read(b) + 1) {
            Some(v) => table.encode(v),
            None => 0,
        });
        self.tally += 1;
        Ok(())
    }

    fn queries(&self) -> usize {
        self.tally
    }
}

/// Applies the XOR oracle of `oracle` to `(layout.index, layout.answer)`.
pub fn apply_function_oracle(
    state: &mut StateVector,
    oracle: &mut OracleUnitary,
    layout: &Layout,
) -> Result<(), QuantumError> {
    layout.check(state)?;
    if layout.n != oracle.domain_size() {
        return Err(QuantumError::DomainMismatch { expected: layout.n, found: oracle.domain_size() });
    }
    let wires =
        OracleWires { input: layout.index, output: layout.answer, workspace: Register::new(layout.ancilla.offset, 0) };
    oracle.apply(state, wires)
}

/// Clean simulation of the XOR oracle for `h_{π,f}` from two calls to the
/// oracle for `f` on `{1..n/2}`.
///
/// With code `x = i - 1`, both branches of the construction probe `f` at
/// code `x >> 1`, so the high qubits of the `h` index register serve as
/// `f`'s index register. One workspace qubit holds `f`'s answer between the
/// two calls. The correction controlled on that qubit is applied after each
/// call, so the net effect is `f(j)` corrections whatever the qubit's
/// initial value, and the simulation is exact on the whole space.
pub struct CleanHOracle<'a> {
    pi: Permutation,
    f: &'a mut dyn QuantumOracle,
}

impl<'a> CleanHOracle<'a> {
    pub fn new(pi: Permutation, f: &'a mut dyn QuantumOracle) -> Result<Self, QuantumError> {
        let n = pi.n();
        if !n.is_multiple_of(2) {
            return Err(QuantumError::Layout(format!("h oracle needs even n, got {n}")));
        }
        if f.domain_size() != n / 2 {
            return Err(QuantumError::DomainMismatch { expected: n / 2, found: f.domain_size() });
        }
        if f.codomain() != Codomain::Bits {
            return Err(QuantumError::Layout("f oracle must be boolean".into()));
        }
        Ok(Self { pi, f })
    }
}

impl QuantumOracle for CleanHOracle<'_> {
    fn domain_size(&self) -> usize {
        self.pi.n()
    }

    fn codomain(&self) -> Codomain {
        Codomain::Range(self.pi.n())
    }

    fn workspace_width(&self) -> usize {
        1 + self.f.workspace_width()
    }

    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError> {
        let n = self.pi.n();
        let codomain = self.codomain();
        check_wires(state, &wires, n, self.answer_width(), self.workspace_width())?;
        let input = wires.input;
        let flag = wires.workspace.slice(0, 1);
        let f_wires = OracleWires {
            input: input.slice(1, input.width - 1),
            output: flag,
            workspace: wires.workspace.slice(1, wires.workspace.width - 1),
        };
        // Codes whose point is redirected when f fires: even points for P0,
        // odd points for P1.
        let redirect_odd_code = self.pi.class() == InstanceClass::P0;
        let pi = &self.pi;
        let enc = |v| encode_value(codomain, v);

        state.xor_into(wires.output, |b| {
            let x = input.read(b);
            if x < n {
                enc(pi.apply(x + 1))
            } else {
                0
            }
        });
        let correct = |b: usize| {
            let x = input.read(b);
            if flag.read(b) == 1 && x < n && (x % 2 == 1) == redirect_odd_code {
                enc(pi.apply(x + 1)) ^ enc(1)
            } else {
                0
            }
        };
        self.f.apply(state, f_wires)?;
        state.xor_into(wires.output, correct);
        self.f.apply(state, f_wires)?;
        state.xor_into(wires.output, correct);
        Ok(())
    }

    fn queries(&self) -> usize {
        self.f.queries()
    }
}

/// One clean `h_{π,f}` query on `(layout.index, layout.answer)` using the
/// first ancilla qubit(s) as workspace.
pub fn clean_h_query(
    state: &mut StateVector,
    p: &Permutation,
    f_oracle: &mut dyn QuantumOracle,
    layout: &Layout,
) -> Result<(), QuantumError> {
    layout.check(state)?;
    if layout.n != p.n() {
        return Err(QuantumError::DomainMismatch { expected: layout.n, found: p.n() });
    }
    let mut h = CleanHOracle::new(p.clone(), f_oracle)?;
    if layout.ancilla.width < h.workspace_width() {
        return Err(QuantumError::Layout("clean h query needs an ancilla qubit".into()));
    }
    let wires = OracleWires { input: layout.index, output: layout.answer, workspace: layout.ancilla };
    h.apply(state, wires)
}

/// XOR oracle for `f(i) = [π(i) = 1 and i even]` on `{1..n}` from two
/// calls to an oracle for `π`: compute `π(i)` into the workspace, flip the
/// answer bit, then erase the workspace with the second call. The workspace
/// must start in `|0⟩`.
pub struct ForwardSearchOracle<'a> {
    pi: &'a mut dyn QuantumOracle,
}

pub fn forward_search_oracle(
    p_oracle: &mut dyn QuantumOracle,
    n: usize,
) -> Result<ForwardSearchOracle<'_>, QuantumError> {
    if !n.is_multiple_of(2) {
        return Err(QuantumError::Layout(format!("forward reduction needs even n, got {n}")));
    }
    if p_oracle.domain_size() != n {
        return Err(QuantumError::DomainMismatch { expected: n, found: p_oracle.domain_size() });
    }
    if p_oracle.codomain() != Codomain::Range(n) {
        return Err(QuantumError::Layout("π oracle must map into 1..n".into()));
    }
    Ok(ForwardSearchOracle { pi: p_oracle })
}

impl<'a> ForwardSearchOracle<'a> {
    pub fn new(p_oracle: &'a mut dyn QuantumOracle) -> Result<Self, QuantumError> {
        let n = p_oracle.domain_size();
        forward_search_oracle(p_oracle, n)
    }
}

impl QuantumOracle for ForwardSearchOracle<'_> {
    fn domain_size(&self) -> usize {
        self.pi.domain_size()
    }

    fn codomain(&self) -> Codomain {
        Codomain::Bits
    }

    fn workspace_width(&self) -> usize {
        self.pi.answer_width() + self.pi.workspace_width()
    }

    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError> {
        let n = self.domain_size();
        check_wires(state, &wires, n, 1, self.workspace_width())?;
        let width = self.pi.answer_width();
        let value = wires.workspace.slice(0, width);
        let pi_wires = OracleWires {
            input: wires.input,
            output: value,
            workspace: wires.workspace.slice(width, wires.workspace.width - width),
        };
        let one = encode_value(Codomain::Range(n), 1);
        let input = wires.input;
        self.pi.apply(state, pi_wires)?;
        // code x is odd exactly when the point x + 1 is even
        state.xor_into(wires.output, |b| {
            let x = input.read(b);
            usize::from(x < n && x % 2 == 1 && value.read(b) == one)
        });
        self.pi.apply(state, pi_wires)
    }

    fn queries(&self) -> usize {
        self.pi.queries()
    }
}
