//! Parameter sweeps over strip thickness and triangle count.

// Filled in alongside the solver bring-up.
