"""Frequency and moment learning of neurons."""
