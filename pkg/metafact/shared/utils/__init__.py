"""Shared utilities: exceptions, logging, validators and small helpers."""
