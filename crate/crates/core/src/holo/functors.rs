//! Isogeny functors (stub).
