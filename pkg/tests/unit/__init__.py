# Unit tests for Image Categorizer
