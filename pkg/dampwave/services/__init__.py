"""Experiment services: one module per command family"""
