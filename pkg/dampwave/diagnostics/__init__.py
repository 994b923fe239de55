"""Energy, decay and space-time diagnostics of simulation traces"""
