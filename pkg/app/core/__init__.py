"""
Core package
Exception hierarchy shared by services, routers and the CLI
"""
