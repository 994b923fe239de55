"""MCP tool handlers"""
