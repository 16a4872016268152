# Integration tests for Image Categorizer
