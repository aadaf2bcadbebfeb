//! Flat postfix form of an expression for fast repeated `f64` evaluation
//! (the quadrature and sampling inner loops).  Division by zero is not
//! trapped here: it surfaces as a non-finite result that callers check.

use super::{rational_to_f64, EvalError, Expr, PI_NAME};

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(f64),
    Load(usize),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow(i32),
    Sin,
    Cos,
    Exp,
}

/// A compiled expression over a fixed variable order.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    ops: Vec<Op>,
    arity: usize,
    max_stack: usize,
}

impl CompiledExpr {
    /// Compiles `e` against the variable order `vars`.  The reserved `pi`
    /// becomes an inline constant when it is not an explicit variable; any
    /// other unbound name is an error.
    pub fn compile(e: &Expr, vars: &[String]) -> Result<CompiledExpr, EvalError> {
        let mut ops = Vec::new();
        emit(e, vars, &mut ops)?;
        // Stack height analysis: every op pushes one after popping its
        // arguments, so the maximum is reached at some prefix.
        let mut height = 0usize;
        let mut max = 0usize;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Load(_) => height += 1,
                Op::Add | Op::Sub | Op::Mul | Op::Div => height -= 1,
                _ => {}
            }
            max = max.max(height);
        }
        Ok(CompiledExpr {
            ops,
            arity: vars.len(),
            max_stack: max,
        })
    }

    /// Number of variables the argument slice must provide.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Evaluates with a caller-provided scratch stack (cleared on entry),
    /// avoiding per-call allocation in hot loops.
    pub fn eval_with(&self, args: &[f64], stack: &mut Vec<f64>) -> f64 {
        debug_assert_eq!(args.len(), self.arity);
        stack.clear();
        stack.reserve(self.max_stack);
        for op in &self.ops {
            match *op {
                Op::Const(c) => stack.push(c),
                Op::Load(i) => stack.push(args[i]),
                Op::Neg => {
                    let a = stack.last_mut().expect("stack underflow");
                    *a = -*a;
                }
                Op::Add => {
                    let b = stack.pop().expect("stack underflow");
                    *stack.last_mut().expect("stack underflow") += b;
                }
                Op::Sub => {
                    let b = stack.pop().expect("stack underflow");
                    *stack.last_mut().expect("stack underflow") -= b;
                }
                Op::Mul => {
                    let b = stack.pop().expect("stack underflow");
                    *stack.last_mut().expect("stack underflow") *= b;
                }
                Op::Div => {
                    let b = stack.pop().expect("stack underflow");
                    *stack.last_mut().expect("stack underflow") /= b;
                }
                Op::Pow(k) => {
                    let a = stack.last_mut().expect("stack underflow");
                    *a = a.powi(k);
                }
                Op::Sin => {
                    let a = stack.last_mut().expect("stack underflow");
                    *a = a.sin();
                }
                Op::Cos => {
                    let a = stack.last_mut().expect("stack underflow");
                    *a = a.cos();
                }
                Op::Exp => {
                    let a = stack.last_mut().expect("stack underflow");
                    *a = a.exp();
                }
            }
        }
        stack.pop().expect("compiled expression leaves one value")
    }

    /// Convenience wrapper allocating its own stack.
    pub fn eval(&self, args: &[f64]) -> f64 {
        let mut stack = Vec::with_capacity(self.max_stack);
        self.eval_with(args, &mut stack)
    }
}

fn emit(e: &Expr, vars: &[String], ops: &mut Vec<Op>) -> Result<(), EvalError> {
    match e {
        Expr::Const(c) => ops.push(Op::Const(rational_to_f64(c))),
        Expr::Var(v) => match vars.iter().position(|name| name == v) {
            Some(i) => ops.push(Op::Load(i)),
            None if v == PI_NAME => ops.push(Op::Const(std::f64::consts::PI)),
            None => return Err(EvalError::UnboundVariable(v.clone())),
        },
        Expr::Neg(a) => {
            emit(a, vars, ops)?;
            ops.push(Op::Neg);
        }
        Expr::Add(a, b) => {
            emit(a, vars, ops)?;
            emit(b, vars, ops)?;
            ops.push(Op::Add);
        }
        Expr::Sub(a, b) => {
            emit(a, vars, ops)?;
            emit(b, vars, ops)?;
            ops.push(Op::Sub);
        }
        Expr::Mul(a, b) => {
            emit(a, vars, ops)?;
            emit(b, vars, ops)?;
            ops.push(Op::Mul);
        }
        Expr::Div(a, b) => {
            emit(a, vars, ops)?;
            emit(b, vars, ops)?;
            ops.push(Op::Div);
        }
        Expr::Pow(a, k) => {
            emit(a, vars, ops)?;
            ops.push(Op::Pow(*k as i32));
        }
        Expr::Sin(a) => {
            emit(a, vars, ops)?;
            ops.push(Op::Sin);
        }
        Expr::Cos(a) => {
            emit(a, vars, ops)?;
            ops.push(Op::Cos);
        }
        Expr::Exp(a) => {
            emit(a, vars, ops)?;
            ops.push(Op::Exp);
        }
    }
    Ok(())
}
