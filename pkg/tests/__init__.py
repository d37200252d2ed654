# Test package initialization 