# Import all endpoint modules
