"""Probabilistic neural networks learned from stationary ergodic samples."""
