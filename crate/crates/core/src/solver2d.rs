//! Placeholder, replaced by the dimension-by-dimension 2D solver.
